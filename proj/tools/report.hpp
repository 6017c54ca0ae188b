#pragma once

#include <string>

#include "json.hpp"
#include "stqmle/inference.hpp"
#include "stqmle/model.hpp"
#include "stqmle/optimizer.hpp"
#include "stqmle/simulate.hpp"

namespace stqmle::cli {

using Json = nlohmann::ordered_json;

Json ToJson(const WeightsCache& cache);
WeightsCache WeightsCacheFromJson(const Json& j);

Json ToJson(const FitDiagnostics& d);
Json ToJson(const InferenceReport& r);
Json ToJson(const SubsamplingResult& s);
Json ToJson(const SimulationDesign& d);
Json ToJson(const MonteCarloSummary& s);

// parameter,estimate,se,ci_lower,ci_upper
std::string CoefficientsCsv(const InferenceReport& r);
// One row per parameter: bias, MSE, sample SD, plug-in SE, coverage, mean time.
std::string SummaryCsv(const MonteCarloSummary& s);

}  // namespace stqmle::cli
