#include "zoh/design.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "zoh/errors.hpp"

namespace zoh {

namespace {

constexpr std::array<const char*, 3> kTauLabels = {"switching", "growth", "activation"};
constexpr std::array<const char*, 3> kTauFormulas = {
    "(inf_phi*g_min*beta - 2*kappa0)/(M_phi^2*F_tilde*E_hat)",
    "kappa0/kappa1^2",
    "(1 - lambda)/(M_phi*(F_tilde + g_max*lambda) + kappa0)",
};

void validate(const DesignInputs& in) {
  if (!(in.lambda > 0.0 && in.lambda < 1.0)) {
    throw ConfigError("design: lambda must lie in (0,1)");
  }
  if (!(in.beta_margin >= 1.0)) throw ConfigError("design: beta_margin must be >= 1");
  const auto& b = in.bounds;
  if (!(b.f_max >= 0.0) || !std::isfinite(b.f_max)) {
    throw ConfigError("design: f_max must be finite and >= 0");
  }
  if (!(b.g_min > 0.0) || !std::isfinite(b.g_max) || !(b.g_min <= b.g_max)) {
    throw ConfigError("design: gain bounds must satisfy 0 < g_min <= g_max < inf");
  }
  if (!(in.yref_acc_bound >= 0.0)) throw ConfigError("design: yref_acc_bound must be >= 0");
  if (!(in.e1_initial_norm >= 0.0)) throw ConfigError("design: e1_initial_norm must be >= 0");
}

}  // namespace

double solve_xi(const AlphaSpec& alpha, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::domain_error("solve_xi: r must be finite and >= 0");
  const double target = 1.0 + r;
  double lo = 0.0;
  double hi = 1.0;
  // ξ ↦ α(ξ²)ξ is strictly increasing from 0 to ∞ on (0,1).
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (alpha_eval(alpha, mid * mid).value * mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double f_lo = target - alpha_eval(alpha, lo * lo).value * lo;
  const double f_hi = (hi < 1.0) ? alpha_eval(alpha, hi * hi).value * hi - target : INFINITY;
  return f_lo <= f_hi ? lo : hi;
}

double derivative_error_bound(const NormBlock& norms, const AlphaSpec& alpha,
                              double e1_initial_norm) {
  const double eps1 = std::max(e1_initial_norm, solve_xi(alpha, norms.ratio));
  if (!(eps1 < 1.0)) throw InfeasibleDesign("design: initial error outside the funnel (eps1 >= 1)", -1);
  return norms.m_phi * (1.0 + alpha_eval(alpha, eps1 * eps1).value * eps1);
}

DesignParameters evaluate_design(const DesignInputs& in, std::optional<double> beta_override) {
  validate(in);
  const NormBlock& n = in.norms;
  const WorstCaseBounds& wb = in.bounds;
  const double M = n.m_phi;

  DesignParameters p;
  p.inputs = in;
  p.lambda = in.lambda;

  p.xi = solve_xi(in.alpha, n.ratio);
  p.eps1 = std::max(in.e1_initial_norm, p.xi);
  if (!(p.eps1 < 1.0)) {
    throw InfeasibleDesign("design: initial error outside the funnel (eps1 >= 1)", -1);
  }
  const AlphaValue a_xi = alpha_eval(in.alpha, p.xi * p.xi);
  const AlphaValue a_e1 = alpha_eval(in.alpha, p.eps1 * p.eps1);
  p.alpha_xi = a_xi.value * p.xi;
  p.alpha_eps1 = a_e1.value * p.eps1;

  p.gamma_bar = (2.0 * a_e1.derivative * p.eps1 * p.eps1 + a_e1.value) * (p.alpha_xi + p.alpha_eps1);
  p.kappa0 = n.ratio * (1.0 + p.alpha_eps1) + M * (wb.f_max + in.yref_acc_bound) + p.gamma_bar;
  p.eps_hat = M * (1.0 + p.alpha_eps1);
  p.E_hat = M * p.eps_hat + p.alpha_eps1;
  p.beta_min = 2.0 * M * p.kappa0 / wb.g_min;
  if (beta_override) {
    if (!(*beta_override >= 0.0) || !std::isfinite(*beta_override)) {
      throw ConfigError("design: beta override must be finite and >= 0");
    }
    p.beta = *beta_override;
    p.beta_overridden = true;
  } else {
    p.beta = in.beta_margin * p.beta_min;
  }
  p.F_tilde = 0.5 * (wb.f_max + wb.g_max * M * p.beta / in.lambda);
  p.kappa1 = p.kappa0 + M * p.beta * wb.g_max;

  p.tau_terms[0] = (n.inf_phi * wb.g_min * p.beta - 2.0 * p.kappa0) / (M * M * p.F_tilde * p.E_hat);
  p.tau_terms[1] = p.kappa0 / (p.kappa1 * p.kappa1);
  p.tau_terms[2] = (1.0 - in.lambda) / (M * (p.F_tilde + wb.g_max * in.lambda) + p.kappa0);
  const auto it = std::min_element(p.tau_terms.begin(), p.tau_terms.end());
  p.binding_term = static_cast<int>(it - p.tau_terms.begin());
  p.tau_max = *it;
  return p;
}

DesignParameters derive_design_parameters(const DesignInputs& in) {
  DesignParameters p = evaluate_design(in);
  for (int i = 0; i < 3; ++i) {
    if (!(p.tau_terms[static_cast<std::size_t>(i)] > 0.0)) {
      std::ostringstream os;
      os << "design: sampling-time bound infeasible, " << kTauLabels[static_cast<std::size_t>(i)]
         << " term " << kTauFormulas[static_cast<std::size_t>(i)] << " = "
         << p.tau_terms[static_cast<std::size_t>(i)] << " <= 0";
      throw InfeasibleDesign(os.str(), i);
    }
  }
  return p;
}

std::vector<TauCandidate> explain_tau(const DesignParameters& params) {
  std::vector<TauCandidate> out;
  out.reserve(3);
  for (std::size_t i = 0; i < 3; ++i) {
    out.push_back({kTauLabels[i], kTauFormulas[i], params.tau_terms[i],
                   static_cast<int>(i) == params.binding_term});
  }
  return out;
}

std::string format_tau_report(const DesignParameters& params) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "sampling-time bound candidates:\n";
  for (const auto& c : explain_tau(params)) {
    os << "  " << (c.binding ? "* " : "  ") << std::left << std::setw(11) << c.label
       << std::right << std::setw(18) << c.value << "   " << c.formula << '\n';
  }
  os << "tau_max = " << params.tau_max << (params.feasible() ? "" : "  (INFEASIBLE)") << '\n';
  return os.str();
}

}  // namespace zoh
