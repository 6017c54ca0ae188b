#include "report.hpp"

#include <cmath>
#include <sstream>

#include "stqmle/io/text.hpp"

namespace stqmle::cli {

namespace {

// NaN and infinities become null.
Json Num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string Cell(double v) { return std::isfinite(v) ? io::FormatDouble(v) : ""; }

const char* FamilyName(InnovationFamily f) {
  return f == InnovationFamily::kStudentT ? "student_t" : "gaussian";
}

}  // namespace

Json ToJson(const WeightsCache& c) {
  Json j;
  j["n"] = c.n;
  j["bandwidth"] = c.bandwidth;
  j["d_min"] = c.d_min;
  j["d_max"] = c.d_max;
  j["checksum"] = c.checksum;
  j["permutation"] = c.permutation;
  return j;
}

WeightsCache WeightsCacheFromJson(const Json& j) {
  try {
    WeightsCache c;
    c.n = j.at("n").get<Index>();
    c.bandwidth = j.at("bandwidth").get<Index>();
    c.d_min = j.at("d_min").get<double>();
    c.d_max = j.at("d_max").get<double>();
    c.checksum = j.at("checksum").get<std::string>();
    c.permutation = j.at("permutation").get<std::vector<Index>>();
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("weights cache: ") + e.what());
  }
}

Json ToJson(const FitDiagnostics& d) {
  Json j;
  j["status"] = ToString(d.status);
  j["iterations"] = d.iterations;
  j["grad_norm"] = Num(d.grad_norm);
  j["loglik_trace"] = d.loglik_trace;
  j["boundary_hits"] = d.boundary_hits;
  j["hessian_resets"] = d.hessian_resets;
  j["evaluations"] = d.evaluations;
  j["starts"] = d.starts;
  j["timings"] = {{"setup_seconds", d.setup_seconds},
                  {"optimize_seconds", d.optimize_seconds},
                  {"total_seconds", d.total_seconds}};
  return j;
}

Json ToJson(const InferenceReport& r) {
  Json j;
  j["alpha"] = r.alpha;
  j["beta"] = Json::array();
  for (std::size_t i = 0; i < r.beta_hat.size(); ++i) {
    j["beta"].push_back({{"name", "beta" + std::to_string(i)},
                         {"estimate", r.beta_hat[i]},
                         {"se", Num(r.beta_se[i])},
                         {"ci_lower", Num(r.ci_lower[i])},
                         {"ci_upper", Num(r.ci_upper[i])}});
  }
  j["theta"] = {{"lambda", r.theta_hat.lambda},
                {"gamma", r.theta_hat.gamma},
                {"rho", r.theta_hat.rho}};
  if (r.theta_se) {
    j["theta_se"] = {{"lambda", (*r.theta_se)[0]},
                     {"gamma", (*r.theta_se)[1]},
                     {"rho", (*r.theta_se)[2]}};
  } else {
    j["theta_se"] = nullptr;
  }
  j["sigma2"] = r.sigma2_hat;
  j["beta_method"] = r.beta_method;
  j["theta_method"] = r.theta_method;
  j["warnings"] = r.warnings;
  return j;
}

Json ToJson(const SubsamplingResult& s) {
  Json j;
  j["se"] = {{"lambda", s.se[0]}, {"gamma", s.se[1]}, {"rho", s.se[2]}};
  j["block_count"] = s.block_count;
  j["block_cells"] = s.block_cells;
  j["block_theta"] = Json::array();
  for (const auto& th : s.block_theta) j["block_theta"].push_back(th);
  j["failures"] = s.failures;
  j["warnings"] = s.warnings;
  return j;
}

Json ToJson(const SimulationDesign& d) {
  Json j;
  j["grid_side"] = d.grid_side;
  j["N"] = d.N();
  j["T"] = d.T;
  j["order"] = d.order == NeighborOrder::kFirst ? "first" : "second";
  j["beta"] = d.truth.beta;
  j["theta"] = {{"lambda", d.truth.theta.lambda},
                {"gamma", d.truth.theta.gamma},
                {"rho", d.truth.theta.rho}};
  j["sigma2"] = d.truth.sigma2;
  j["family"] = FamilyName(d.family);
  if (d.family == InnovationFamily::kStudentT) j["df"] = d.df;
  j["burn_in"] = d.burn_in;
  j["n_reps"] = d.n_reps;
  j["seed"] = d.seed;
  return j;
}

Json ToJson(const MonteCarloSummary& s) {
  Json j;
  j["requested"] = s.requested;
  j["succeeded"] = s.succeeded;
  j["failed"] = s.failed;
  j["empty"] = s.empty;
  j["failure_flag"] = s.failure_flag;
  j["mean_fit_seconds"] = s.mean_fit_seconds;
  j["parameters"] = Json::array();
  for (const ParameterSummary& p : s.parameters) {
    j["parameters"].push_back({{"name", p.name},
                               {"truth", p.truth},
                               {"mean", p.mean},
                               {"bias", p.bias},
                               {"mse", p.mse},
                               {"sd", p.sd},
                               {"bias_se", p.bias_se},
                               {"mean_plugin_se", Num(p.mean_plugin_se)},
                               {"coverage", Num(p.coverage)}});
  }
  Json errors = Json::array();
  for (std::size_t r = 0; r < s.replications.size(); ++r) {
    if (!s.replications[r].ok) {
      errors.push_back({{"replication", r}, {"error", s.replications[r].error}});
    }
  }
  j["errors"] = errors;
  return j;
}

std::string CoefficientsCsv(const InferenceReport& r) {
  std::ostringstream os;
  os << "parameter,estimate,se,ci_lower,ci_upper\n";
  for (std::size_t i = 0; i < r.beta_hat.size(); ++i) {
    os << "beta" << i << ',' << Cell(r.beta_hat[i]) << ',' << Cell(r.beta_se[i]) << ','
       << Cell(r.ci_lower[i]) << ',' << Cell(r.ci_upper[i]) << '\n';
  }
  const auto th = r.theta_hat.AsArray();
  const char* names[] = {"lambda", "gamma", "rho"};
  for (int i = 0; i < 3; ++i) {
    os << names[i] << ',' << Cell(th[i]) << ',';
    if (r.theta_se) os << Cell((*r.theta_se)[i]);
    os << ",,\n";
  }
  os << "sigma2," << Cell(r.sigma2_hat) << ",,,\n";
  return os.str();
}

std::string SummaryCsv(const MonteCarloSummary& s) {
  std::ostringstream os;
  os << "parameter,truth,mean,bias,mse,sample_sd,bias_se,mean_plugin_se,coverage,"
        "mean_time_seconds,replications\n";
  for (const ParameterSummary& p : s.parameters) {
    os << p.name << ',' << Cell(p.truth) << ',' << Cell(p.mean) << ',' << Cell(p.bias) << ','
       << Cell(p.mse) << ',' << Cell(p.sd) << ',' << Cell(p.bias_se) << ','
       << Cell(p.mean_plugin_se) << ',' << Cell(p.coverage) << ',' << Cell(s.mean_fit_seconds)
       << ',' << s.succeeded << '\n';
  }
  return os.str();
}

}  // namespace stqmle::cli
