#pragma once

// Systems of the form
//   ÿ = f(d, y, ẏ, η) + g(d, y, ẏ, η)·u
//   η̇ = h(η, y, ẏ)
// with relative degree two, and the linear input-output family.

#include <numbers>
#include <vector>

#include "zoh/design.hpp"
#include "zoh/signals.hpp"
#include "zoh/types.hpp"

namespace zoh {

class PlantModel {
 public:
  virtual ~PlantModel() = default;

  virtual int output_dim() const = 0;
  virtual int internal_dim() const = 0;
  virtual int disturbance_dim() const = 0;

  virtual Vector drift(const Vector& d, const Vector& y, const Vector& ydot,
                       const Vector& eta) const = 0;
  virtual Matrix gain(const Vector& d, const Vector& y, const Vector& ydot,
                      const Vector& eta) const = 0;
  virtual Vector internal(const Vector& eta, const Vector& y, const Vector& ydot) const = 0;
  virtual Vector disturbance(double t) const = 0;
  virtual Vector initial_internal() const = 0;
};

/// ÿ = R0·y + R1·ẏ + S·η + D·d(t) + Γ·u,   η̇ = Q·η + P·y.
///
/// Q must be Hurwitz and the symmetric part of Γ positive definite; both are
/// checked on construction. The disturbance d is a sum of sinusoids per
/// channel and is absent (p = 0) unless set via with_disturbance.
class LinearIOPlant final : public PlantModel {
 public:
  LinearIOPlant(Matrix r0, Matrix r1, Matrix s, Matrix gamma, Matrix q, Matrix p, Vector eta0);

  LinearIOPlant with_disturbance(Matrix d, std::vector<std::vector<Sinusoid>> channels) const;
  LinearIOPlant with_initial_internal(Vector eta0) const;

  int output_dim() const override { return static_cast<int>(gamma_.rows()); }
  int internal_dim() const override { return static_cast<int>(q_.rows()); }
  int disturbance_dim() const override { return static_cast<int>(d_.cols()); }

  Vector drift(const Vector& d, const Vector& y, const Vector& ydot,
               const Vector& eta) const override;
  Matrix gain(const Vector& d, const Vector& y, const Vector& ydot,
              const Vector& eta) const override;
  Vector internal(const Vector& eta, const Vector& y, const Vector& ydot) const override;
  Vector disturbance(double t) const override;
  Vector initial_internal() const override { return eta0_; }

  const Matrix& r0() const noexcept { return r0_; }
  const Matrix& r1() const noexcept { return r1_; }
  const Matrix& s() const noexcept { return s_; }
  const Matrix& gamma() const noexcept { return gamma_; }
  const Matrix& q() const noexcept { return q_; }
  const Matrix& p() const noexcept { return p_; }
  const Matrix& d() const noexcept { return d_; }
  const Vector& eta0() const noexcept { return eta0_; }
  const std::vector<std::vector<Sinusoid>>& disturbance_channels() const noexcept {
    return dist_;
  }
  /// Upper bound on ‖d(t)‖ over t ≥ 0.
  double disturbance_bound() const;

 private:
  Matrix r0_, r1_, s_, gamma_, q_, p_, d_;
  Vector eta0_;
  std::vector<std::vector<Sinusoid>> dist_;
};

/// Car of mass m1 carrying a ramp inclined by theta on which a mass m2 slides,
/// tied to the car by a spring (k) and damper (d). The input is the force on
/// the car. Measured output is either the horizontal position of the car z
/// or that of the sliding mass, z + s·cos(ϑ).
enum class MassOnCarOutput { Car, RampMass };

struct MassOnCarParams {
  double m1 = 4.0;
  double m2 = 1.0;
  double k = 2.0;
  double d = 1.0;
  double theta = std::numbers::pi / 4.0;
  MassOnCarOutput output = MassOnCarOutput::Car;
};

/// Input-output realisation with c = cos ϑ, σ = sin²ϑ, μ = d/m2 and s the
/// displacement of m2 along the ramp:
///   Car:       η₁ = s + c·y,       η₂ = ṡ + c·ẏ − μc·y
///   RampMass:  η₁ = s + (c/σ)·y,   η₂ = σ·ṡ + c·ẏ − (μc/σ)·y
/// The internal state starts at zero unless replaced via
/// LinearIOPlant::with_initial_internal.
LinearIOPlant mass_on_car(const MassOnCarParams& params = {});

/// Internal coordinates for a physical configuration: output position and
/// velocity y, ẏ (as selected by params.output) and ramp displacement s, ṡ.
Vector mass_on_car_internal_state(const MassOnCarParams& params, double y, double ydot,
                                  double s, double sdot);

/// Lemma-type worst-case bounds on the compact set ‖y‖ ≤ y_bound,
/// ‖ẏ‖ ≤ ydot_bound, ‖η‖ ≤ eta_bound:
///   f_max = ‖R0‖·Y + ‖R1‖·Ẏ + ‖S‖·H + ‖D‖·‖d‖∞,  g_max = ‖Γ‖,
///   g_min = λ_min((Γ+Γᵀ)/2).
WorstCaseBounds worst_case_bounds(const LinearIOPlant& plant, double y_bound,
                                  double ydot_bound, double eta_bound);

/// H = M‖η⁰‖ + M‖P‖Y/ω where ‖exp(Qt)‖ ≤ M e^(−ωt).
double bibs_state_bound(const Matrix& q, const Matrix& p, const Vector& eta0, double y_bound);

}  // namespace zoh
