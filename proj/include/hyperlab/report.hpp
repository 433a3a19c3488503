#pragma once

#include <iosfwd>
#include <span>
#include <string_view>

#include <json.hpp>

#include "hyperlab/explorer.hpp"
#include "hyperlab/stats.hpp"

namespace hyperlab {

inline constexpr std::string_view kVersion = "1.0.0";

// Per-run CSV: "# schema=1" comment, then seed,L1,L2,n_components rows in
// run order. LF line endings, no trailing comma.
void write_runs_csv(std::span<const RunSummary> summaries, std::ostream& out);

// Flat JSON with the documented keys: m, sample_mean, sample_var,
// theory_mean, theory_var, ks_statistic, ks_p_value, standardized.
nlohmann::json to_json(const NormalityReport& report);

// Flat JSON: alpha, grid_step, ordered_lengths (plus bookkeeping fields).
nlohmann::json to_json(const ExcursionSample& sample);

// Single-run diagnostic CSV joining the recorded walk with the deterministic
// trajectories: t,eta,A,U,C,X,x_t,u_t,Xtilde,wc_bound. One row per step.
void write_diagnostic_csv(const ExplorationTrace& trace, const DecompositionTrace& decomp,
                          const ModelParams& params, std::ostream& out);

}  // namespace hyperlab
