#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stqmle/optimizer.hpp"
#include "stqmle/simulate.hpp"

namespace stqmle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitModel = 2;

struct RunConfig {
  std::string command;  // simulate | fit | mc-study | bench
  std::filesystem::path weights;
  std::filesystem::path panel;
  std::filesystem::path out = ".";
  std::filesystem::path config;
  std::filesystem::path weights_cache;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  double level = 0.95;
  std::string log_level = "info";  // quiet | info | debug
  // Key/value settings from the config file.
  std::map<std::string, std::string> settings;
};

// --threads, then STQMLE_THREADS, then the `threads` setting, then the
// hardware thread count.
int ResolveThreads(const RunConfig& cfg);

// Typed views of the settings; throw kInvalidArgument on bad values.
SimulationDesign DesignFromSettings(const RunConfig& cfg);
OptimizerConfig OptimizerFromSettings(const RunConfig& cfg);

int CmdSimulate(const RunConfig& cfg);
int CmdFit(const RunConfig& cfg);
int CmdMcStudy(const RunConfig& cfg);
int CmdBench(const RunConfig& cfg);

struct BenchPoint {
  Index side = 0;
  Index N = 0;
  Index T = 0;
  Index bandwidth = 0;
  double weights_seconds = 0.0;
  double eval_seconds = 0.0;
  std::vector<double> fit_seconds;
  double median_fit_seconds = 0.0;
  std::size_t peak_heap_bytes = 0;  // during the fits, including the panel
  std::size_t rss_high_water_bytes = 0;
  int iterations = 0;
  std::int64_t evaluations = 0;
};

// Simulates one default-preset panel on a side x side grid and times
// likelihood evaluation and `reps` full fits.
BenchPoint RunBenchPoint(Index side, Index t_len, int reps, std::uint64_t seed);

// Least-squares slope of log(y) on log(x); nullopt for fewer than two points.
std::optional<double> LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);

// Parses argv, loads the config file and dispatches. Returns the exit code.
int Main(int argc, char** argv);

}  // namespace stqmle::cli
