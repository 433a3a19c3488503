#include "hyperlab/report.hpp"

#include <cstdio>
#include <ostream>

namespace hyperlab {

namespace {

// Fixed shortest-ish representation; snprintf is locale-stable under the
// default "C" locale, which keeps outputs byte-identical across runs.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void write_runs_csv(std::span<const RunSummary> summaries, std::ostream& out) {
  out << "# schema=1\n";
  out << "seed,L1,L2,n_components\n";
  for (const auto& s : summaries) {
    out << s.seed << ',' << s.L1() << ',' << s.L2() << ',' << s.n_components << '\n';
  }
}

nlohmann::json to_json(const NormalityReport& report) {
  nlohmann::json j;
  j["m"] = report.m;
  j["sample_mean"] = report.sample_mean;
  j["sample_var"] = report.sample_var;
  j["theory_mean"] = report.theory_mean;
  j["theory_var"] = report.theory_var;
  j["ks_statistic"] = report.ks_statistic;
  j["ks_p_value"] = report.ks_p_value;
  j["standardized"] = report.standardized;
  return j;
}

nlohmann::json to_json(const ExcursionSample& sample) {
  nlohmann::json j;
  j["alpha"] = sample.alpha;
  j["grid_step"] = sample.grid_step;
  j["ordered_lengths"] = sample.ordered_lengths;
  j["simulated_time"] = sample.simulated_time;
  j["renewal_steps"] = sample.renewal_steps;
  return j;
}

void write_diagnostic_csv(const ExplorationTrace& trace, const DecompositionTrace& decomp,
                          const ModelParams& params, std::ostream& out) {
  out << "t,eta,A,U,C,X,x_t,u_t,Xtilde,wc_bound\n";
  const std::vector<double> x = mean_walk_trajectory(params);
  for (int64_t t = 1; t <= trace.n; ++t) {
    out << t << ',' << trace.eta[t] << ',' << trace.A[t] << ',' << trace.U[t] << ','
        << trace.C[t] << ',' << trace.X[t] << ',' << fmt(x[t]) << ','
        << fmt(expected_unseen(params, t)) << ',' << fmt(decomp.approx_walk[t]) << ','
        << fmt(decomp.approx_gap[t]) << '\n';
  }
}

}  // namespace hyperlab
