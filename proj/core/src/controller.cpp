#include "zoh/controller.hpp"

#include <cmath>
#include <sstream>

#include "zoh/errors.hpp"

namespace zoh {

namespace {

double checked_alpha(const Vector& e1, const AlphaSpec& alpha) {
  const double n2 = e1.squaredNorm();
  if (!(n2 < 1.0)) {
    std::ostringstream os;
    os << "funnel violation: ||e1|| = " << std::sqrt(n2) << " >= 1";
    throw FunnelViolation(os.str());
  }
  return alpha_eval(alpha, n2).value;
}

}  // namespace

void ControlLawConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ConfigError("controller.beta must be finite and >= 0");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("controller.lambda must lie in (0,1)");
}

ControllerState initial_controller_state(int output_dim, double tau) {
  if (!(tau > 0.0)) throw ConfigError("controller: sampling period must be > 0");
  return {Vector::Zero(output_dim), Vector::Zero(output_dim), 0, tau};
}

Vector aux_e1(const Vector& e, double phi) { return phi * e; }

Vector aux_e2(const Vector& e, const Vector& edot, double phi, const AlphaSpec& alpha) {
  const Vector e1 = aux_e1(e, phi);
  return phi * edot + checked_alpha(e1, alpha) * e1;
}

Vector surrogate_E(const Vector& e_k, const Vector& e_km1, double phi_k, double tau,
                   const AlphaSpec& alpha) {
  if (!(tau > 0.0)) throw std::domain_error("surrogate_E: tau must be > 0");
  const Vector e1 = aux_e1(e_k, phi_k);
  return phi_k * (e_k - e_km1) / tau + checked_alpha(e1, alpha) * e1;
}

LawOutput switching_law(const Vector& v, double beta, double lambda) {
  const double n = v.norm();
  if (n < lambda) return {-beta * v, LawBranch::Linear};
  return {(-beta / (n * n)) * v, LawBranch::Saturating};
}

LawOutput zoh_law(const Vector& E, const ControlLawConfig& cfg) {
  return switching_law(E, cfg.beta, cfg.lambda);
}

LawOutput zoh_deriv_law(const Vector& e2, const ControlLawConfig& cfg) {
  return switching_law(e2, cfg.beta, cfg.lambda);
}

StepResult controller_step(const ControllerState& state, const Vector& y,
                           const std::optional<Vector>& ydot, const ReferenceSample& ref,
                           double phi, const ControlLawConfig& cfg) {
  const bool deriv = cfg.variant == LawVariant::DerivativeBased;
  if (deriv && !ydot) {
    throw ConfigError("controller: derivative-based law requires the output derivative");
  }
  if (!deriv && ydot) {
    throw ConfigError("controller: derivative-free law must not receive the output derivative");
  }
  StepResult r;
  r.error = y - ref.y;
  LawOutput law;
  if (deriv) {
    r.signal = aux_e2(r.error, *ydot - ref.ydot, phi, cfg.alpha);
    law = zoh_deriv_law(r.signal, cfg);
  } else {
    r.signal = surrogate_E(r.error, state.prev_sample_error, phi, state.tau, cfg.alpha);
    law = zoh_law(r.signal, cfg);
  }
  r.u = std::move(law.u);
  r.branch = law.branch;
  r.state = state;
  r.state.prev_sample_error = r.error;
  r.state.held_input = r.u;
  r.state.sample_index = state.sample_index + 1;
  return r;
}

}  // namespace zoh
