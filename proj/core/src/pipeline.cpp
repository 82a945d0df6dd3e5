#include "zoh/pipeline.hpp"

namespace zoh {

PlantDesign design_for_plant(const LinearIOPlant& plant, const ReferenceSpec& reference,
                             const FunnelSpec& funnel, const PlantDesignRequest& request) {
  const NormBlock norms = funnel_norms(funnel);
  const ReferenceBounds rb = reference_bounds(reference);
  constexpr double e1_initial = 0.0;

  PlantDesign out;
  out.y_bound = rb.y + 1.0 / norms.inf_phi;
  out.ydot_bound = rb.ydot + derivative_error_bound(norms, request.alpha, e1_initial);
  out.eta_bound = bibs_state_bound(plant.q(), plant.p(), plant.eta0(), out.y_bound);

  DesignInputs in;
  in.norms = norms;
  in.bounds = request.bounds_override
                  ? *request.bounds_override
                  : worst_case_bounds(plant, out.y_bound, out.ydot_bound, out.eta_bound);
  in.yref_acc_bound = rb.yddot;
  in.e1_initial_norm = e1_initial;
  in.lambda = request.lambda;
  in.alpha = request.alpha;
  in.beta_margin = request.beta_margin;
  out.params = evaluate_design(in, request.beta_override);
  return out;
}

}  // namespace zoh
