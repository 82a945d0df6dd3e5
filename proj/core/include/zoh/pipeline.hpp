#pragma once

#include <optional>

#include "zoh/design.hpp"
#include "zoh/plant.hpp"
#include "zoh/signals.hpp"

namespace zoh {

struct PlantDesignRequest {
  double lambda = 0.7;
  AlphaSpec alpha{};
  double beta_margin = 1.01;
  std::optional<double> beta_override;
  std::optional<WorstCaseBounds> bounds_override;
};

/// Design constants for a linear plant together with the operating set the
/// worst-case bounds were taken over.
struct PlantDesign {
  DesignParameters params;
  double y_bound = 0.0;     // ‖y_ref‖∞ + 1/inf φ
  double ydot_bound = 0.0;  // ‖ẏ_ref‖∞ + ε̂
  double eta_bound = 0.0;   // BIBS estimate for ‖y‖ ≤ y_bound
};

/// Computes the operating set, the plant's worst-case bounds on it (unless
/// overridden) and the design constants. The closed loop starts on the
/// reference, so ‖e₁(0)‖ = 0. Non-positive sampling bounds are not
/// rejected here; inspect params.feasible().
PlantDesign design_for_plant(const LinearIOPlant& plant, const ReferenceSpec& reference,
                             const FunnelSpec& funnel, const PlantDesignRequest& request);

}  // namespace zoh
