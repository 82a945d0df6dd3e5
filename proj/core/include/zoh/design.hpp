#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "zoh/signals.hpp"

namespace zoh {

/// Worst-case drift and gain constants valid on the operating set implied by
/// funnel containment and ‖e₂‖ ≤ 1.
struct WorstCaseBounds {
  double f_max;
  double g_max;
  double g_min;
};

struct DesignInputs {
  NormBlock norms;
  WorstCaseBounds bounds;
  double yref_acc_bound = 0.0;   // ‖ÿ_ref‖∞
  double e1_initial_norm = 0.0;  // ‖e₁(0)‖ = φ(0)‖e(0)‖
  double lambda = 0.7;
  AlphaSpec alpha{};
  double beta_margin = 1.01;
};

/// Design constants of the derivative-free sample-and-hold controller.
///
/// All formulas use M_φ = max{sup φ, 1/inf φ} where a sup-norm of φ is
/// called for; for constant funnels this is just φ.
struct DesignParameters {
  DesignInputs inputs;

  double xi = 0.0;
  double eps1 = 0.0;
  double alpha_xi = 0.0;    // α(ξ²)ξ
  double alpha_eps1 = 0.0;  // α(ε₁²)ε₁
  double gamma_bar = 0.0;
  double kappa0 = 0.0;
  double eps_hat = 0.0;
  double E_hat = 0.0;
  double beta_min = 0.0;  // 2·M_φ·κ₀/g_min
  double beta = 0.0;
  bool beta_overridden = false;
  double F_tilde = 0.0;
  double kappa1 = 0.0;
  double lambda = 0.0;

  // Candidates for the sampling-time bound, in order:
  //   0: (inf φ·g_min·β − 2κ₀)/(M_φ²·F̃·Ê)
  //   1: κ₀/κ₁²
  //   2: (1 − λ)/(M_φ·(F̃ + g_max·λ) + κ₀)
  std::array<double, 3> tau_terms{};
  int binding_term = 0;
  double tau_max = 0.0;

  bool feasible() const noexcept { return tau_max > 0.0; }
};

/// Unique root ξ ∈ (0,1) of α(ξ²)·ξ = 1 + r, found by bisection carried to
/// full double resolution.
double solve_xi(const AlphaSpec& alpha, double r);

/// ε̂ = M_φ·(1 + α(ε₁²)ε₁), the bound on ‖ė‖ while ‖e₂‖ ≤ 1. Depends only
/// on the funnel, α and the initial error, so it can feed the operating set
/// used to compute the plant bounds.
double derivative_error_bound(const NormBlock& norms, const AlphaSpec& alpha,
                              double e1_initial_norm);

/// Evaluates every constant without rejecting a non-positive sampling bound.
/// When beta_override is set it replaces margin·β_min.
/// Throws InfeasibleDesign if ε₁ ≥ 1 and ConfigError on out-of-range λ,
/// bounds or margin.
DesignParameters evaluate_design(const DesignInputs& in,
                                 std::optional<double> beta_override = std::nullopt);

/// As evaluate_design, and additionally throws InfeasibleDesign naming the
/// first non-positive sampling-time candidate.
DesignParameters derive_design_parameters(const DesignInputs& in);

struct TauCandidate {
  std::string label;
  std::string formula;
  double value;
  bool binding;
};

std::vector<TauCandidate> explain_tau(const DesignParameters& params);

/// Multi-line human-readable derivation trail.
std::string format_tau_report(const DesignParameters& params);

}  // namespace zoh
