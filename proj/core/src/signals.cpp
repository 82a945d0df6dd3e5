#include "zoh/signals.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "zoh/errors.hpp"

namespace zoh {

FunnelSpec::FunnelSpec(Family family, double a, double b, double c)
    : family_(family), a_(a), b_(b), c_(c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ConfigError("funnel: tolerance c must be finite and > 0");
  }
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw ConfigError("funnel: width a must be finite and >= 0");
  }
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw ConfigError("funnel: decay rate b must be finite and >= 0");
  }
}

FunnelSpec FunnelSpec::constant(double tolerance) {
  return FunnelSpec(Family::Constant, 0.0, 0.0, tolerance);
}

FunnelSpec FunnelSpec::exponential_width(double a, double b, double c) {
  return FunnelSpec(Family::ExponentialWidth, a, b, c);
}

FunnelValue funnel_eval(const FunnelSpec& spec, double t) {
  if (spec.family() == FunnelSpec::Family::Constant) {
    return {1.0 / spec.c(), 0.0};
  }
  const double tc = std::max(t, 0.0);
  const double width = spec.a() * std::exp(-spec.b() * tc);
  const double psi = width + spec.c();
  const double phi = 1.0 / psi;
  if (t < 0.0) return {phi, 0.0};
  return {phi, spec.b() * width / (psi * psi)};
}

NormBlock funnel_norms(const FunnelSpec& spec, double /*horizon*/) {
  NormBlock n{};
  if (spec.family() == FunnelSpec::Family::Constant) {
    n.sup_phi = n.inf_phi = 1.0 / spec.c();
    n.ratio = 0.0;
  } else {
    // ψ = 1/φ decreases monotonically from a + c towards c.
    n.sup_phi = 1.0 / spec.c();
    n.inf_phi = 1.0 / (spec.a() + spec.c());
    // φ̇/φ = b·x/(x + c) with x = a·e^(−bt) ∈ (0, a]; increasing in x.
    n.ratio = spec.a() > 0.0 ? spec.b() * spec.a() / (spec.a() + spec.c()) : 0.0;
  }
  n.m_phi = std::max(n.sup_phi, 1.0 / n.inf_phi);
  return n;
}

ReferenceSpec ReferenceSpec::sinusoid_sum(std::vector<std::vector<Sinusoid>> channels) {
  if (channels.empty()) {
    throw ConfigError("reference: at least one output channel is required");
  }
  for (const auto& ch : channels) {
    for (const auto& s : ch) {
      if (!std::isfinite(s.amplitude) || !std::isfinite(s.omega) || !std::isfinite(s.phase)) {
        throw ConfigError("reference: sinusoid parameters must be finite");
      }
    }
  }
  ReferenceSpec r;
  r.family_ = Family::SinusoidSum;
  r.dim_ = static_cast<int>(channels.size());
  r.channels_ = std::move(channels);
  return r;
}

ReferenceSpec ReferenceSpec::constant(Vector value) {
  if (value.size() == 0) {
    throw ConfigError("reference: constant value must have at least one entry");
  }
  if (!value.allFinite()) throw ConfigError("reference: constant value must be finite");
  ReferenceSpec r;
  r.family_ = Family::Constant;
  r.dim_ = static_cast<int>(value.size());
  r.value_ = std::move(value);
  return r;
}

ReferenceSample reference_eval(const ReferenceSpec& spec, double t) {
  const int m = spec.dim();
  if (spec.family() == ReferenceSpec::Family::Constant) {
    return {spec.constant_value(), Vector::Zero(m), Vector::Zero(m)};
  }
  ReferenceSample out{Vector::Zero(m), Vector::Zero(m), Vector::Zero(m)};
  for (int i = 0; i < m; ++i) {
    for (const auto& s : spec.channels()[static_cast<std::size_t>(i)]) {
      const double arg = s.omega * t + s.phase;
      const double sn = std::sin(arg);
      const double cs = std::cos(arg);
      out.y[i] += s.amplitude * sn;
      out.ydot[i] += s.amplitude * s.omega * cs;
      out.yddot[i] -= s.amplitude * s.omega * s.omega * sn;
    }
  }
  return out;
}

ReferenceBounds reference_bounds(const ReferenceSpec& spec) {
  if (spec.family() == ReferenceSpec::Family::Constant) {
    return {spec.constant_value().norm(), 0.0, 0.0};
  }
  double y2 = 0.0, yd2 = 0.0, ydd2 = 0.0;
  for (const auto& ch : spec.channels()) {
    double y = 0.0, yd = 0.0, ydd = 0.0;
    for (const auto& s : ch) {
      const double a = std::abs(s.amplitude);
      const double w = std::abs(s.omega);
      y += a;
      yd += a * w;
      ydd += a * w * w;
    }
    y2 += y * y;
    yd2 += yd * yd;
    ydd2 += ydd * ydd;
  }
  return {std::sqrt(y2), std::sqrt(yd2), std::sqrt(ydd2)};
}

AlphaValue alpha_eval(const AlphaSpec& /*spec*/, double s) {
  if (s < 0.0) throw std::domain_error("alpha: argument must be >= 0");
  if (!(s < 1.0)) {
    std::ostringstream os;
    os << "alpha: argument " << s << " outside [0,1) (funnel boundary reached)";
    throw FunnelViolation(os.str());
  }
  const double d = 1.0 - s;
  return {1.0 / d, 1.0 / (d * d)};
}

}  // namespace zoh
