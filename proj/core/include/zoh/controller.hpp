#pragma once

// Auxiliary error signals, the finite-difference surrogate and the two
// sample-and-hold feedback laws.

#include <optional>

#include "zoh/signals.hpp"
#include "zoh/types.hpp"

namespace zoh {

enum class LawVariant { DerivativeFree, DerivativeBased };

struct ControlLawConfig {
  double beta = 1.0;
  double lambda = 0.7;
  AlphaSpec alpha{};
  LawVariant variant = LawVariant::DerivativeFree;

  /// Throws ConfigError unless beta >= 0 and lambda ∈ (0,1).
  void validate() const;
};

/// State threaded through the per-sample loop.
struct ControllerState {
  Vector prev_sample_error;  // e(t_{k−1})
  Vector held_input;         // u_{k−1}
  long sample_index = 0;
  double tau = 0.0;
};

/// State before the first sample. The initial output history coincides with
/// the reference, so e(−τ) = 0 and u₋₁ = 0.
ControllerState initial_controller_state(int output_dim, double tau);

enum class LawBranch { Linear, Saturating };

struct LawOutput {
  Vector u;
  LawBranch branch;
};

/// e₁ = φ·e
Vector aux_e1(const Vector& e, double phi);

/// e₂ = φ·ė + α(‖e₁‖²)·e₁. Throws FunnelViolation if ‖φ·e‖ ≥ 1.
Vector aux_e2(const Vector& e, const Vector& edot, double phi, const AlphaSpec& alpha);

/// E = φ_k·(e_k − e_{k−1})/τ + α(‖e₁‖²)·e₁ with e₁ = φ_k·e_k.
Vector surrogate_E(const Vector& e_k, const Vector& e_km1, double phi_k, double tau,
                   const AlphaSpec& alpha);

/// u = −β·v if ‖v‖ < λ, else u = −β·v/‖v‖². Hence ‖u‖ ≤ β/λ.
LawOutput switching_law(const Vector& v, double beta, double lambda);

/// Derivative-free law driven by the surrogate E(t_k).
LawOutput zoh_law(const Vector& E, const ControlLawConfig& cfg);

/// Comparator driven by the exact e₂(t_k).
LawOutput zoh_deriv_law(const Vector& e2, const ControlLawConfig& cfg);

struct StepResult {
  Vector u;
  Vector signal;  // E(t_k) or e₂(t_k), whichever the law consumed
  Vector error;   // e(t_k)
  LawBranch branch;
  ControllerState state;
};

/// One sampling instant. ydot must be present iff the variant is
/// DerivativeBased (ConfigError otherwise); ref supplies y_ref(t_k) and, for
/// the derivative-based variant, ẏ_ref(t_k).
StepResult controller_step(const ControllerState& state, const Vector& y,
                           const std::optional<Vector>& ydot, const ReferenceSample& ref,
                           double phi, const ControlLawConfig& cfg);

}  // namespace zoh
