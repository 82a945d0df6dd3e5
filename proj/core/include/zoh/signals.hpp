#pragma once

// Funnel functions, reference trajectories and the gain bijection α.

#include <vector>

#include "zoh/types.hpp"

namespace zoh {

/// Performance function φ. The admissible tracking error is ‖e(t)‖ < 1/φ(t).
///
/// Two families are supported:
///  - Constant:          φ(t) = 1/c
///  - ExponentialWidth:  φ(t) = 1/(a·exp(−b·t) + c)
///
/// Both have inf φ > 0 and bounded φ, φ̇ by construction. For t < 0 the
/// funnel is extended constantly, φ(t) = φ(0) and φ̇(t) = 0.
class FunnelSpec {
 public:
  enum class Family { Constant, ExponentialWidth };

  static FunnelSpec constant(double tolerance);
  static FunnelSpec exponential_width(double a, double b, double c);

  Family family() const noexcept { return family_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }

 private:
  FunnelSpec(Family family, double a, double b, double c);

  Family family_;
  double a_;
  double b_;
  double c_;
};

struct FunnelValue {
  double phi;
  double phi_dot;
};

/// Norm constants of a funnel over [0, ∞).
struct NormBlock {
  double sup_phi;
  double inf_phi;
  double ratio;  // ‖φ̇/φ‖∞
  double m_phi;  // max{sup φ, 1/inf φ}
};

FunnelValue funnel_eval(const FunnelSpec& spec, double t);

/// Closed-form norms. The horizon argument is accepted for interface
/// symmetry; both families attain their extrema on [0, ∞) analytically.
NormBlock funnel_norms(const FunnelSpec& spec, double horizon = 0.0);

struct Sinusoid {
  double amplitude;
  double omega;
  double phase;
};

/// Reference y_ref ∈ W²,∞: either per-channel sums of sinusoids
/// A·sin(ω t + p) or a constant vector.
class ReferenceSpec {
 public:
  enum class Family { SinusoidSum, Constant };

  static ReferenceSpec sinusoid_sum(std::vector<std::vector<Sinusoid>> channels);
  static ReferenceSpec constant(Vector value);

  Family family() const noexcept { return family_; }
  int dim() const noexcept { return dim_; }
  const std::vector<std::vector<Sinusoid>>& channels() const noexcept { return channels_; }
  const Vector& constant_value() const noexcept { return value_; }

 private:
  ReferenceSpec() = default;

  Family family_ = Family::Constant;
  int dim_ = 0;
  std::vector<std::vector<Sinusoid>> channels_;
  Vector value_;
};

struct ReferenceSample {
  Vector y;
  Vector ydot;
  Vector yddot;
};

/// Upper bounds on ‖y_ref‖∞, ‖ẏ_ref‖∞, ‖ÿ_ref‖∞ (Euclidean norm over channels).
/// Exact for a single sinusoid per channel and a single channel.
struct ReferenceBounds {
  double y;
  double ydot;
  double yddot;
};

ReferenceSample reference_eval(const ReferenceSpec& spec, double t);
ReferenceBounds reference_bounds(const ReferenceSpec& spec);

/// Gain bijection α : [0,1) → [1,∞). Only α(s) = 1/(1−s) is provided.
struct AlphaSpec {
  enum class Family { Reciprocal };
  Family family = Family::Reciprocal;
};

struct AlphaValue {
  double value;
  double derivative;
};

/// Throws FunnelViolation for s ≥ 1 and std::domain_error for s < 0.
AlphaValue alpha_eval(const AlphaSpec& spec, double s);

}  // namespace zoh
