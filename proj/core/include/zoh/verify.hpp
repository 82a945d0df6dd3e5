#pragma once

// Post-hoc checks of closed-loop traces against the feasibility guarantees
// and the auxiliary estimates used to establish them.

#include <string>
#include <vector>

#include "zoh/design.hpp"
#include "zoh/sim.hpp"

namespace zoh {

/// Slack applied to non-strict inequalities. Strict ones use none.
inline constexpr double kVerifySlack = 1e-9;

struct Violation {
  double time;
  std::string check;
  double value;
};

struct VerificationReport {
  double funnel_margin = 0.0;    // max_t φ(t)‖e(t)‖, must be < 1
  double e2_max_samples = 0.0;   // max_k ‖e₂(t_k)‖
  double e2_max_dense = 0.0;     // max over the recorded grid
  double e2_max = 0.0;
  double input_max = 0.0;
  double input_bound = 0.0;      // β/λ
  bool lemma_e1e2_ok = true;
  double lemma_worst_offset = 0.0;  // max(‖e₁‖ − ε₁) where the lemma applies
  double surrogate_gap_max = 0.0;   // max_k ‖E(t_k) − e₂(t_k)‖
  double edot_max = 0.0;            // max_t ‖ẏ − ẏ_ref‖, bounded by ε̂
  double E_max = 0.0;               // max_k ‖E(t_k)‖, bounded by Ê
  double e2_estimate_slack = 0.0;   // max_k ‖e₂(t_k)‖ − ‖E(t_k)‖ − τ·M_φ·F̃
  std::vector<Violation> violations;  // first offending instant per check

  bool passed() const noexcept { return violations.empty(); }
};

/// Check names used in Violation::check.
namespace checks {
inline constexpr const char* kFunnel = "funnel";
inline constexpr const char* kE2Samples = "e2_samples";
inline constexpr const char* kE2Dense = "e2_dense";
inline constexpr const char* kInput = "input";
inline constexpr const char* kLemmaE1E2 = "lemma_e1e2";
inline constexpr const char* kEdotBound = "edot_bound";
inline constexpr const char* kEBound = "E_bound";
inline constexpr const char* kE2Estimate = "e2_estimate";
}  // namespace checks

/// Evaluates every check on the recorded rows. Only the row fields written
/// to CSV are consulted (t, y, ẏ, e, u, is_sample, E), so a re-read trace
/// yields the same report. Where ‖e₁‖ ≥ 1, e₂ is undefined: such rows only
/// count against the funnel check, and the lemma premise ends there.
VerificationReport check_trace(const Trace& trace, const FunnelSpec& funnel,
                               const ReferenceSpec& reference, const DesignParameters& params);

std::string format_report(const VerificationReport& report);

/// max_k ‖E(t_k) − e₂(t_k)‖ over the sample rows of a trace.
double surrogate_gap(const Trace& trace, const FunnelSpec& funnel, const ReferenceSpec& reference,
                     const AlphaSpec& alpha);

struct ConsistencyRow {
  double tau;
  double gap;
};

struct ConsistencyStudy {
  std::vector<ConsistencyRow> rows;
  double slope = 0.0;  // least-squares fit of log(gap) against log(tau)
};

/// Re-runs the setup at each sampling period and fits the convergence order
/// of the surrogate gap. Requires at least three periods, all feasible.
ConsistencyStudy surrogate_consistency_study(const SimSetup& setup, const std::vector<double>& taus);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace zoh
