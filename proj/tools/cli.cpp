#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "alloc_tracking.hpp"
#include "report.hpp"
#include "stqmle/inference.hpp"
#include "stqmle/io/matrix_market.hpp"
#include "stqmle/io/panel_csv.hpp"
#include "stqmle/io/text.hpp"
#include "stqmle/likelihood.hpp"
#include "stqmle/parallel.hpp"

#ifndef STQMLE_VERSION
#define STQMLE_VERSION "unknown"
#endif

namespace stqmle::cli {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Errors raised while reading inputs; they map to the I/O exit code whatever
// their underlying kind.
class InputError : public Error {
 public:
  explicit InputError(const Error& e) : Error(e.code(), e.what()) {}
};

template <typename F>
auto InputStage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e);
  }
}

class Log {
 public:
  explicit Log(const std::string& level) {
    if (level == "quiet") {
      level_ = 0;
    } else if (level == "info") {
      level_ = 1;
    } else if (level == "debug") {
      level_ = 2;
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "log level must be quiet, info or debug, got '" + level + "'");
    }
  }
  void Info(const std::string& m) const {
    if (level_ >= 1) std::cerr << "[info] " << m << '\n';
  }
  void Debug(const std::string& m) const {
    if (level_ >= 2) std::cerr << "[debug] " << m << '\n';
  }
  void Warn(const std::string& m) const {
    if (level_ >= 1) std::cerr << "[warn] " << m << '\n';
  }

 private:
  int level_ = 1;
};

const std::string* Find(const RunConfig& cfg, const std::string& key) {
  const auto it = cfg.settings.find(key);
  return it == cfg.settings.end() ? nullptr : &it->second;
}

[[noreturn]] void BadSetting(const std::string& key, const std::string& value,
                             const std::string& want) {
  throw Error(ErrorCode::kInvalidArgument,
              "setting '" + key + "' = '" + value + "': expected " + want);
}

double GetDouble(const RunConfig& cfg, const std::string& key, double fallback) {
  const std::string* v = Find(cfg, key);
  if (!v) return fallback;
  double out = 0.0;
  if (!io::ParseDouble(*v, &out) || !std::isfinite(out)) BadSetting(key, *v, "a finite number");
  return out;
}

long long GetInt(const RunConfig& cfg, const std::string& key, long long fallback) {
  const std::string* v = Find(cfg, key);
  if (!v) return fallback;
  long long out = 0;
  if (!io::ParseInt(*v, &out)) BadSetting(key, *v, "an integer");
  return out;
}

bool GetBool(const RunConfig& cfg, const std::string& key, bool fallback) {
  const std::string* v = Find(cfg, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  BadSetting(key, *v, "true or false");
}

std::vector<long long> GetIntList(const RunConfig& cfg, const std::string& key,
                                  std::vector<long long> fallback) {
  const std::string* v = Find(cfg, key);
  if (!v) return fallback;
  std::vector<long long> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    long long n = 0;
    if (!io::ParseInt(item, &n)) BadSetting(key, *v, "a comma-separated list of integers");
    out.push_back(n);
  }
  if (out.empty()) BadSetting(key, *v, "a non-empty list");
  return out;
}

std::uint64_t Seed(const RunConfig& cfg, std::uint64_t fallback) {
  if (cfg.seed) return *cfg.seed;
  return static_cast<std::uint64_t>(GetInt(cfg, "seed", static_cast<long long>(fallback)));
}

Json Manifest(const RunConfig& cfg, int threads) {
  Json m;
  m["command"] = cfg.command;
  m["versions"] = {{"stqmle", STQMLE_VERSION},
                   {"compiler", __VERSION__},
                   {"cxx_standard", static_cast<long>(__cplusplus)}};
  Json paths;
  Json checksums;
  auto record = [&](const char* name, const std::filesystem::path& p) {
    if (p.empty()) return;
    paths[name] = p.string();
    if (std::filesystem::exists(p)) checksums[name] = io::Fnv1a(io::ReadFile(p));
  };
  record("weights", cfg.weights);
  record("panel", cfg.panel);
  record("config", cfg.config);
  record("weights_cache", cfg.weights_cache);
  m["inputs"] = paths.is_null() ? Json::object() : paths;
  m["input_checksums"] = checksums.is_null() ? Json::object() : checksums;
  m["output_dir"] = cfg.out.string();
  if (cfg.seed) m["seed"] = *cfg.seed;
  m["threads"] = threads;
  m["level"] = cfg.level;
  m["log_level"] = cfg.log_level;
  Json settings = Json::object();
  for (const auto& [k, v] : cfg.settings) settings[k] = v;
  m["settings"] = settings;
  return m;
}

void WriteJson(const std::filesystem::path& path, const Json& j) {
  io::AtomicWrite(path, j.dump(2) + "\n");
}

void EnsureOutDir(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + out.string());
  }
}

void RequireFile(const std::filesystem::path& p, const char* what) {
  if (p.empty()) throw Error(ErrorCode::kIo, std::string("--") + what + " is required");
  if (!std::filesystem::is_regular_file(p)) {
    throw Error(ErrorCode::kIo, std::string(what) + " file not found: " + p.string());
  }
}

SpatialWeights LoadWeights(const RunConfig& cfg, const Log& log) {
  SymSparseMatrix w = io::ReadMatrixMarketFile(cfg.weights);
  if (!cfg.weights_cache.empty() && std::filesystem::exists(cfg.weights_cache)) {
    Json j;
    try {
      j = Json::parse(io::ReadFile(cfg.weights_cache));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse,
                  cfg.weights_cache.string() + ": invalid JSON: " + e.what());
    }
    log.Info("reusing weights cache " + cfg.weights_cache.string());
    return SpatialWeights::FromCache(std::move(w), WeightsCacheFromJson(j));
  }
  SpatialWeights built = SpatialWeights::Build(std::move(w));
  if (!cfg.weights_cache.empty()) WriteJson(cfg.weights_cache, ToJson(built.cache()));
  return built;
}

int ModelFailure(const MonteCarloSummary& s) { return s.empty ? kExitModel : kExitOk; }

}  // namespace

int ResolveThreads(const RunConfig& cfg) {
  if (cfg.threads) {
    if (*cfg.threads < 1) throw Error(ErrorCode::kInvalidArgument, "--threads must be positive");
    return *cfg.threads;
  }
  if (const char* env = std::getenv("STQMLE_THREADS"); env && *env) {
    long long n = 0;
    if (!io::ParseInt(env, &n) || n < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("STQMLE_THREADS must be a positive integer, got '") + env + "'");
    }
    return static_cast<int>(n);
  }
  const long long n = GetInt(cfg, "threads", 0);
  if (n < 0) BadSetting("threads", *Find(cfg, "threads"), "a positive integer");
  return n > 0 ? static_cast<int>(n) : HardwareThreads();
}

SimulationDesign DesignFromSettings(const RunConfig& cfg) {
  const Index side = GetInt(cfg, "grid_side", 10);
  const Index t_len = GetInt(cfg, "T", 5);
  const std::string preset = Find(cfg, "preset") ? *Find(cfg, "preset") : "default";
  SimulationDesign d;
  if (preset == "default") {
    d = DefaultPreset(side, t_len);
  } else if (preset == "literal") {
    d = LiteralPreset(side, t_len);
  } else {
    BadSetting("preset", preset, "default or literal");
  }
  if (const std::string* o = Find(cfg, "order")) {
    if (*o == "first") {
      d.order = NeighborOrder::kFirst;
    } else if (*o == "second") {
      d.order = NeighborOrder::kSecond;
    } else {
      BadSetting("order", *o, "first or second");
    }
  }
  d.truth.beta[0] = GetDouble(cfg, "beta0", d.truth.beta[0]);
  d.truth.beta[1] = GetDouble(cfg, "beta1", d.truth.beta[1]);
  d.truth.theta.lambda = GetDouble(cfg, "lambda", d.truth.theta.lambda);
  d.truth.theta.gamma = GetDouble(cfg, "gamma", d.truth.theta.gamma);
  d.truth.theta.rho = GetDouble(cfg, "rho", d.truth.theta.rho);
  d.truth.sigma2 = GetDouble(cfg, "sigma2", d.truth.sigma2);
  if (const std::string* f = Find(cfg, "family")) {
    if (*f == "gaussian") {
      d.family = InnovationFamily::kGaussian;
    } else if (*f == "student_t") {
      d.family = InnovationFamily::kStudentT;
    } else {
      BadSetting("family", *f, "gaussian or student_t");
    }
  }
  d.df = GetDouble(cfg, "df", d.df);
  d.burn_in = GetInt(cfg, "burn_in", d.burn_in);
  d.n_reps = GetInt(cfg, "reps", d.n_reps);
  d.seed = Seed(cfg, d.seed);
  d.Validate();
  return d;
}

OptimizerConfig OptimizerFromSettings(const RunConfig& cfg) {
  OptimizerConfig o;
  o.max_iters = static_cast<int>(GetInt(cfg, "max_iters", o.max_iters));
  o.grad_tol = GetDouble(cfg, "grad_tol", o.grad_tol);
  o.step_tol = GetDouble(cfg, "step_tol", o.step_tol);
  o.initial_theta.lambda = GetDouble(cfg, "init_lambda", 0.0);
  o.initial_theta.gamma = GetDouble(cfg, "init_gamma", 0.0);
  o.initial_theta.rho = GetDouble(cfg, "init_rho", 0.0);
  o.profile_beta = GetBool(cfg, "profile_beta", o.profile_beta);
  o.multistart = GetBool(cfg, "multistart", o.multistart);
  o.seed = Seed(cfg, o.seed);
  o.Validate();
  return o;
}

int CmdSimulate(const RunConfig& cfg) {
  const Log log(cfg.log_level);
  const SimulationDesign design = DesignFromSettings(cfg);
  const int threads = ResolveThreads(cfg);
  EnsureOutDir(cfg.out);

  const SpatialWeights w = MakeGridWeights(design.grid_side, design.order);
  const std::vector<double> x = MakeDesignMatrix(design.N(), design.T, design.seed);
  Rng rng = MakeStream(design.seed, 0);
  const PanelData panel = SimulatePanel(design, w, x, rng);

  io::AtomicWrite(cfg.out / "weights.mtx", io::MatrixMarketString(w.original()));
  io::AtomicWrite(cfg.out / "panel.csv", io::PanelCsvString(panel));
  Json m = Manifest(cfg, threads);
  m["design"] = ToJson(design);
  m["outputs"] = {{"weights.mtx", io::Fnv1a(io::ReadFile(cfg.out / "weights.mtx"))},
                  {"panel.csv", io::Fnv1a(io::ReadFile(cfg.out / "panel.csv"))}};
  WriteJson(cfg.out / "manifest.json", m);
  log.Info("wrote " + std::to_string(design.N()) + " x " + std::to_string(design.T) +
           " panel to " + cfg.out.string());
  return kExitOk;
}

int CmdFit(const RunConfig& cfg) {
  const Log log(cfg.log_level);
  const auto t0 = Clock::now();
  const OptimizerConfig opt = OptimizerFromSettings(cfg);
  const int threads = ResolveThreads(cfg);
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "--level must lie in (0, 1)");
  }

  const auto [w, panel] = InputStage([&] {
    RequireFile(cfg.weights, "weights");
    RequireFile(cfg.panel, "panel");
    SpatialWeights weights = LoadWeights(cfg, log);
    PanelData data = io::ReadPanelCsvFile(cfg.panel);
    if (data.N() != weights.N()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "panel has " + std::to_string(data.N()) + " cells but W is " +
                      std::to_string(weights.N()) + " x " + std::to_string(weights.N()));
    }
    return std::pair<SpatialWeights, PanelData>(std::move(weights), std::move(data));
  });
  for (const auto& msg : w.warnings()) log.Warn(msg);
  const double load_seconds = Seconds(t0);
  log.Info("N = " + std::to_string(w.N()) + ", T = " + std::to_string(panel.T()) +
           ", k = " + std::to_string(panel.k()) + ", bandwidth " +
           std::to_string(w.banded().bandwidth()));
  log.Debug("d_min = " + io::FormatDouble(w.d_min()) + ", d_max = " + io::FormatDouble(w.d_max()));

  const FitResult fit = Fit(panel, w, opt);
  const SmallMatrix cov = BetaCovarianceFromGram(fit.gram, fit.params.sigma2);
  InferenceReport report = ConfidenceIntervals(fit.params, cov, 1.0 - cfg.level);

  Json subsampling = nullptr;
  const long long rows = GetInt(cfg, "grid_rows", 0), cols = GetInt(cfg, "grid_cols", 0);
  if (rows > 0 && cols > 0) {
    BlockSpec spec;
    spec.grid_rows = rows;
    spec.grid_cols = cols;
    spec.block_side = GetInt(cfg, "block_side", 0);
    spec.stride = GetInt(cfg, "block_stride", 0);
    spec.min_cells = GetInt(cfg, "min_block_cells", spec.min_cells);
    spec.min_blocks = GetInt(cfg, "min_blocks", spec.min_blocks);
    try {
      const SubsamplingResult sub = ThetaSubsamplingSe(panel, w, opt, spec, threads);
      report.theta_se = sub.se;
      report.theta_method = "spatial-subsampling";
      for (const auto& m : sub.warnings) report.warnings.push_back(m);
      subsampling = ToJson(sub);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooFewBlocks) throw;
      report.warnings.push_back(std::string("theta standard errors unavailable: ") + e.what());
    }
  }
  for (const auto& m : w.warnings()) report.warnings.push_back(m);
  for (const auto& m : report.warnings) log.Warn(m);

  EnsureOutDir(cfg.out);
  Json j;
  j["estimates"] = ToJson(report);
  j["loglik"] = fit.loglik;
  j["logdet_K"] = fit.logdet_K;
  j["logdet_S_abs"] = fit.logdet_S_abs;
  j["N"] = w.N();
  j["T"] = panel.T();
  j["k"] = panel.k();
  j["weights"] = {{"bandwidth", w.banded().bandwidth()},
                  {"d_min", w.d_min()},
                  {"d_max", w.d_max()},
                  {"checksum", Checksum(w.original())}};
  j["subsampling"] = subsampling;
  j["diagnostics"] = ToJson(fit.diagnostics);
  j["timings"] = {{"load_seconds", load_seconds},
                  {"fit_seconds", fit.diagnostics.total_seconds},
                  {"total_seconds", Seconds(t0)}};
  WriteJson(cfg.out / "fit.json", j);
  io::AtomicWrite(cfg.out / "coefficients.csv", CoefficientsCsv(report));
  WriteJson(cfg.out / "manifest.json", Manifest(cfg, threads));
  log.Info(std::string("fit ") + ToString(fit.diagnostics.status) + " after " +
           std::to_string(fit.diagnostics.iterations) + " iterations, loglik " +
           io::FormatDouble(fit.loglik));
  return kExitOk;
}

int CmdMcStudy(const RunConfig& cfg) {
  const Log log(cfg.log_level);
  const SimulationDesign design = DesignFromSettings(cfg);
  const OptimizerConfig opt = OptimizerFromSettings(cfg);
  MonteCarloOptions mc;
  mc.threads = ResolveThreads(cfg);
  mc.level = cfg.level;
  if (!(mc.level > 0.0 && mc.level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "--level must lie in (0, 1)");
  }
  EnsureOutDir(cfg.out);
  log.Info("running " + std::to_string(design.n_reps) + " replications on " +
           std::to_string(mc.threads) + " thread(s)");
  const MonteCarloSummary s = RunMonteCarlo(design, opt, mc);

  Json j;
  j["design"] = ToJson(design);
  j["summary"] = ToJson(s);
  io::AtomicWrite(cfg.out / "summary.csv", SummaryCsv(s));
  WriteJson(cfg.out / "summary.json", j);
  Json m = Manifest(cfg, mc.threads);
  m["design"] = ToJson(design);
  WriteJson(cfg.out / "manifest.json", m);
  if (s.empty) log.Warn("no replications requested; the summary is empty");
  if (s.failure_flag) {
    log.Warn(std::to_string(s.failed) + " of " + std::to_string(s.requested) +
             " replications failed");
  }
  return ModelFailure(s);
}

BenchPoint RunBenchPoint(Index side, Index t_len, int reps, std::uint64_t seed) {
  BenchPoint p;
  p.side = side;
  p.N = side * side;
  p.T = t_len;
  SimulationDesign design = DefaultPreset(side, t_len);
  design.seed = seed;

  auto t0 = Clock::now();
  const SpatialWeights w = MakeGridWeights(side);
  p.weights_seconds = Seconds(t0);
  p.bandwidth = w.banded().bandwidth();

  const std::vector<double> x = MakeDesignMatrix(p.N, t_len, seed);
  Rng rng = MakeStream(seed, 0);
  const PanelData panel = SimulatePanel(design, w, x, rng);
  const PanelData aligned = panel.Permuted(w.permutation());

  {
    LikelihoodWorkspace ws(w);
    t0 = Clock::now();
    ws.Update(design.truth.theta);
    QuasiLoglik(aligned, design.truth, ws);
    p.eval_seconds = Seconds(t0);
  }

  tools::ResetPeakHeap();
  for (int r = 0; r < reps; ++r) {
    const FitResult fit = Fit(panel, w);
    p.fit_seconds.push_back(fit.diagnostics.total_seconds);
    p.iterations = fit.diagnostics.iterations;
    p.evaluations = fit.diagnostics.evaluations;
  }
  p.peak_heap_bytes = tools::PeakHeapBytes();
  p.rss_high_water_bytes = tools::ResidentHighWater();
  std::vector<double> sorted = p.fit_seconds;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty()) {
    const std::size_t m = sorted.size() / 2;
    p.median_fit_seconds =
        sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
  }
  return p;
}

std::optional<double> LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) return std::nullopt;
  return sxy / sxx;
}

int CmdBench(const RunConfig& cfg) {
  const Log log(cfg.log_level);
  const std::vector<long long> sides = GetIntList(cfg, "bench_sides", {50, 100, 200});
  const Index t_len = GetInt(cfg, "T", 10);
  const int reps = static_cast<int>(GetInt(cfg, "bench_reps", 3));
  const std::uint64_t seed = Seed(cfg, 20240101);
  if (reps < 1) throw Error(ErrorCode::kInvalidArgument, "bench_reps must be positive");
  if (t_len < 1) throw Error(ErrorCode::kInvalidArgument, "T must be positive");
  for (long long s : sides) {
    if (s < 2) throw Error(ErrorCode::kInvalidArgument, "bench_sides entries must be at least 2");
  }
  const int threads = ResolveThreads(cfg);
  EnsureOutDir(cfg.out);

  std::vector<BenchPoint> points;
  std::ostringstream csv;
  csv << "N,T,bandwidth,weights_seconds,eval_seconds,median_fit_seconds,iterations,"
         "peak_heap_bytes,rss_high_water_bytes\n";
  for (long long side : sides) {
    log.Info("bench N = " + std::to_string(side * side));
    const BenchPoint p = RunBenchPoint(side, t_len, reps, seed);
    csv << p.N << ',' << p.T << ',' << p.bandwidth << ',' << io::FormatDouble(p.weights_seconds)
        << ',' << io::FormatDouble(p.eval_seconds) << ','
        << io::FormatDouble(p.median_fit_seconds) << ',' << p.iterations << ','
        << p.peak_heap_bytes << ',' << p.rss_high_water_bytes << '\n';
    points.push_back(p);
  }

  std::vector<double> ns, times;
  Json jp = Json::array();
  for (const BenchPoint& p : points) {
    ns.push_back(static_cast<double>(p.N));
    times.push_back(p.median_fit_seconds);
    jp.push_back({{"N", p.N},
                  {"T", p.T},
                  {"bandwidth", p.bandwidth},
                  {"weights_seconds", p.weights_seconds},
                  {"eval_seconds", p.eval_seconds},
                  {"fit_seconds", p.fit_seconds},
                  {"median_fit_seconds", p.median_fit_seconds},
                  {"iterations", p.iterations},
                  {"evaluations", p.evaluations},
                  {"peak_heap_bytes", p.peak_heap_bytes},
                  {"rss_high_water_bytes", p.rss_high_water_bytes}});
  }
  Json j;
  j["points"] = jp;
  if (const auto slope = LogLogSlope(ns, times)) {
    j["loglog_slope"] = *slope;
    log.Info("log-log slope of median fit time vs N: " + io::FormatDouble(*slope));
  } else {
    j["loglog_slope"] = nullptr;
    j["note"] = "slope omitted: the ladder needs at least two distinct N";
    log.Info("slope omitted: single-point ladder");
  }
  io::AtomicWrite(cfg.out / "timing.csv", csv.str());
  WriteJson(cfg.out / "bench.json", j);
  WriteJson(cfg.out / "manifest.json", Manifest(cfg, threads));
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Quasi-maximum likelihood for spatio-temporal autoregressive panels"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint64_t seed = 0;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output directory");
    sub->add_option("--config", cfg.config, "key = value settings file");
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--threads", threads, "Worker threads");
    sub->add_option("--log-level", cfg.log_level, "quiet | info | debug");
  };
  CLI::App* fit = app.add_subcommand("fit", "Fit a panel and report inference");
  fit->add_option("--weights", cfg.weights, "Matrix Market weight matrix");
  fit->add_option("--panel", cfg.panel, "Long-format panel CSV");
  fit->add_option("--weights-cache", cfg.weights_cache, "Preprocessed weights JSON");
  fit->add_option("--level", cfg.level, "Confidence level");
  add_common(fit);
  CLI::App* sim = app.add_subcommand("simulate", "Write a simulated grid panel");
  add_common(sim);
  CLI::App* mc = app.add_subcommand("mc-study", "Run a Monte Carlo study");
  mc->add_option("--level", cfg.level, "Confidence level");
  add_common(mc);
  CLI::App* bench = app.add_subcommand("bench", "Time fits across a ladder of N");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  const CLI::App* used = app.get_subcommands().front();
  if (used->count("--seed")) cfg.seed = seed;
  if (used->count("--threads")) cfg.threads = threads;

  try {
    if (!cfg.config.empty()) {
      InputStage([&] {
        std::ifstream in(cfg.config);
        if (!in) throw Error(ErrorCode::kIo, "cannot open config " + cfg.config.string());
        cfg.settings = io::ParseConfig(in, cfg.config.string());
        return 0;
      });
    }
    if (cfg.command == "fit") return CmdFit(cfg);
    if (cfg.command == "simulate") return CmdSimulate(cfg);
    if (cfg.command == "mc-study") return CmdMcStudy(cfg);
    return CmdBench(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error (" << ToString(e.code()) << "): " << e.what() << '\n';
    return e.code() == ErrorCode::kIo || e.code() == ErrorCode::kParse ? kExitIo : kExitModel;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModel;
  }
}

}  // namespace stqmle::cli
