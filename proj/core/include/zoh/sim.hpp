#pragma once

// Closed-loop sample-and-hold simulation.

#include <memory>
#include <string>
#include <vector>

#include "zoh/controller.hpp"
#include "zoh/plant.hpp"
#include "zoh/signals.hpp"

namespace zoh {

enum class Integrator { RK4Fixed };

struct SimConfig {
  double tau = 0.0;
  double horizon = 0.0;
  int substeps = 20;
  Integrator integrator = Integrator::RK4Fixed;
  int record_stride = 1;

  void validate() const;
};

struct PlantState {
  Vector y;
  Vector ydot;
  Vector eta;
};

/// One recorded point of the dense grid. E is populated on sample rows only
/// and always holds the finite-difference surrogate, whichever law ran.
struct TraceRow {
  double t = 0.0;
  Vector y, ydot, eta, e, u;
  double norm_e1 = 0.0;
  double norm_e2 = 0.0;
  bool is_sample = false;
  Vector E;
};

struct SampleRecord {
  double t = 0.0;
  Vector signal;  // input of the law: E for the free variant, e₂ otherwise
  LawBranch branch = LawBranch::Linear;
  std::size_t row = 0;
};

enum class TraceStatus { Completed, FunnelViolation, NumericalBlowup };

struct Trace {
  int output_dim = 0;
  int internal_dim = 0;
  double tau = 0.0;
  double horizon = 0.0;
  LawVariant variant = LawVariant::DerivativeFree;
  std::vector<TraceRow> rows;
  std::vector<SampleRecord> samples;
  TraceStatus status = TraceStatus::Completed;
  double violation_time = 0.0;
  std::string message;

  bool feasible() const noexcept { return status == TraceStatus::Completed; }
};

struct HoldSegment {
  std::vector<double> times;        // excludes t0, ends at t1
  std::vector<PlantState> states;
};

/// Classical RK4 over the stacked state (y, ẏ, η) with u held fixed.
/// Throws NumericalBlowup on a non-finite intermediate state.
HoldSegment integrate_hold(const PlantModel& plant, const PlantState& x0, const Vector& u,
                           double t0, double t1, int substeps);

/// Runs the closed loop on [0, horizon]. The initial output history equals
/// the reference, so y(0) = y_ref(0), ẏ(0) = ẏ_ref(0) and u₋₁ = 0.
/// Funnel violations and blow-ups end the run early and are reported
/// through Trace::status.
Trace simulate(const PlantModel& plant, const ReferenceSpec& reference, const FunnelSpec& funnel,
               const ControlLawConfig& law, const SimConfig& cfg);

struct SimSetup {
  std::shared_ptr<const PlantModel> plant;
  ReferenceSpec reference;
  FunnelSpec funnel;
  ControlLawConfig law;
  SimConfig sim;
};

Trace simulate(const SimSetup& setup);

struct VariantComparison {
  Trace free;
  Trace deriv;
  double max_input_diff = 0.0;   // max_k ‖u_free(t_k) − u_deriv(t_k)‖
  double max_output_diff = 0.0;  // max_t ‖y_free(t) − y_deriv(t)‖

  bool both_feasible() const noexcept { return free.feasible() && deriv.feasible(); }
};

/// Runs both laws on the same grid. Differences cover the common prefix
/// when one of the runs ends early.
VariantComparison compare_variants(const SimSetup& setup);

const char* to_string(TraceStatus s);

}  // namespace zoh
