#include "zoh/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zoh/errors.hpp"
#include "zoh/linalg.hpp"

namespace zoh {

namespace {

struct Stacked {
  Eigen::Index m;
  Eigen::Index l;

  Vector pack(const PlantState& s) const {
    Vector x(2 * m + l);
    x << s.y, s.ydot, s.eta;
    return x;
  }
  PlantState unpack(const Vector& x) const {
    return {x.head(m), x.segment(m, m), x.tail(l)};
  }
};

Vector rhs(const PlantModel& plant, const Stacked& st, double t, const Vector& x, const Vector& u) {
  const Vector y = x.head(st.m);
  const Vector yd = x.segment(st.m, st.m);
  const Vector eta = x.tail(st.l);
  const Vector d = plant.disturbance(t);
  Vector dx(x.size());
  dx.head(st.m) = yd;
  dx.segment(st.m, st.m) = plant.drift(d, y, yd, eta) + plant.gain(d, y, yd, eta) * u;
  if (st.l > 0) dx.tail(st.l) = plant.internal(eta, y, yd);
  return dx;
}

void fill_errors(TraceRow& row, const ReferenceSpec& reference, const FunnelSpec& funnel,
                 const AlphaSpec& alpha) {
  const ReferenceSample ref = reference_eval(reference, row.t);
  const double phi = funnel_eval(funnel, row.t).phi;
  row.e = row.y - ref.y;
  const Vector e1 = phi * row.e;
  row.norm_e1 = e1.norm();
  if (row.norm_e1 < 1.0) {
    row.norm_e2 = (phi * (row.ydot - ref.ydot) + alpha_eval(alpha, row.norm_e1 * row.norm_e1).value * e1).norm();
  } else {
    row.norm_e2 = std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

void SimConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("sim: tau must be finite and > 0");
  if (!(horizon >= tau) || !std::isfinite(horizon)) throw ConfigError("sim: horizon must be >= tau");
  if (horizon / tau > 1e12) throw ConfigError("sim: horizon/tau exceeds the supported sample count");
  if (substeps < 1) throw ConfigError("sim: substeps must be >= 1");
  if (record_stride < 1) throw ConfigError("sim: record_stride must be >= 1");
}

HoldSegment integrate_hold(const PlantModel& plant, const PlantState& x0, const Vector& u,
                           double t0, double t1, int substeps) {
  if (!(t1 > t0)) throw std::domain_error("integrate_hold: t1 must exceed t0");
  if (substeps < 1) throw std::domain_error("integrate_hold: substeps must be >= 1");
  const Stacked st{plant.output_dim(), plant.internal_dim()};
  const double h = (t1 - t0) / substeps;
  HoldSegment seg;
  seg.times.reserve(static_cast<std::size_t>(substeps));
  seg.states.reserve(static_cast<std::size_t>(substeps));
  Vector x = st.pack(x0);
  double t = t0;
  for (int j = 1; j <= substeps; ++j) {
    const Vector k1 = rhs(plant, st, t, x, u);
    const Vector k2 = rhs(plant, st, t + 0.5 * h, x + 0.5 * h * k1, u);
    const Vector k3 = rhs(plant, st, t + 0.5 * h, x + 0.5 * h * k2, u);
    const Vector k4 = rhs(plant, st, t + h, x + h * k3, u);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (j == substeps) ? t1 : t0 + j * h;
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "numerical blow-up in substep " << j << " of [" << t0 << ", " << t1 << "]";
      throw NumericalBlowup(os.str());
    }
    seg.times.push_back(t);
    seg.states.push_back(st.unpack(x));
  }
  return seg;
}

Trace simulate(const PlantModel& plant, const ReferenceSpec& reference, const FunnelSpec& funnel,
               const ControlLawConfig& law, const SimConfig& cfg) {
  cfg.validate();
  law.validate();
  const int m = plant.output_dim();
  if (reference.dim() != m) throw ConfigError("sim: reference dimension differs from plant output");

  Trace tr;
  tr.output_dim = m;
  tr.internal_dim = plant.internal_dim();
  tr.tau = cfg.tau;
  tr.horizon = cfg.horizon;
  tr.variant = law.variant;

  const bool deriv = law.variant == LawVariant::DerivativeBased;
  const ReferenceSample ref0 = reference_eval(reference, 0.0);
  PlantState x{ref0.y, ref0.ydot, plant.initial_internal()};
  ControllerState cs = initial_controller_state(m, cfg.tau);

  const auto n_intervals = static_cast<long>(std::ceil(cfg.horizon / cfg.tau - 1e-9));
  tr.rows.reserve(static_cast<std::size_t>(n_intervals) *
                  static_cast<std::size_t>(cfg.substeps / cfg.record_stride + 1) + 1);
  tr.samples.reserve(static_cast<std::size_t>(n_intervals));

  auto fail = [&tr](TraceStatus s, double t, std::string msg) {
    tr.status = s;
    tr.violation_time = t;
    tr.message = std::move(msg);
  };

  for (long k = 0; k < n_intervals; ++k) {
    const double tk = static_cast<double>(k) * cfg.tau;
    const double tk1 = std::min(static_cast<double>(k + 1) * cfg.tau, cfg.horizon);
    const ReferenceSample ref = reference_eval(reference, tk);
    const double phi = funnel_eval(funnel, tk).phi;

    {
      const Vector d = plant.disturbance(tk);
      if (!(linalg::min_symmetric_eigenvalue(plant.gain(d, x.y, x.ydot, x.eta)) > 0.0)) {
        throw AssumptionViolation("sim: plant gain lost positive definiteness");
      }
    }

    StepResult step;
    Vector surrogate;
    try {
      const Vector prev = cs.prev_sample_error;
      step = controller_step(cs, x.y, deriv ? std::optional<Vector>(x.ydot) : std::nullopt, ref,
                             phi, law);
      surrogate = deriv ? surrogate_E(step.error, prev, phi, cfg.tau, law.alpha) : step.signal;
    } catch (const FunnelViolation& ex) {
      TraceRow row;
      row.t = tk;
      row.y = x.y;
      row.ydot = x.ydot;
      row.eta = x.eta;
      row.u = cs.held_input;
      row.is_sample = true;
      fill_errors(row, reference, funnel, law.alpha);
      tr.rows.push_back(std::move(row));
      fail(TraceStatus::FunnelViolation, tk, ex.what());
      return tr;
    }
    cs = step.state;

    TraceRow srow;
    srow.t = tk;
    srow.y = x.y;
    srow.ydot = x.ydot;
    srow.eta = x.eta;
    srow.u = step.u;
    srow.is_sample = true;
    srow.E = surrogate;
    fill_errors(srow, reference, funnel, law.alpha);
    tr.samples.push_back({tk, step.signal, step.branch, tr.rows.size()});
    tr.rows.push_back(std::move(srow));

    HoldSegment seg;
    try {
      seg = integrate_hold(plant, x, step.u, tk, tk1, cfg.substeps);
    } catch (const NumericalBlowup& ex) {
      fail(TraceStatus::NumericalBlowup, tk, ex.what());
      return tr;
    }
    const bool last = (k + 1 == n_intervals);
    for (std::size_t j = 0; j < seg.times.size(); ++j) {
      const bool end = (j + 1 == seg.times.size());
      TraceRow row;
      row.t = seg.times[j];
      row.y = seg.states[j].y;
      row.ydot = seg.states[j].ydot;
      row.eta = seg.states[j].eta;
      row.u = step.u;
      fill_errors(row, reference, funnel, law.alpha);
      const bool violated = !(row.norm_e1 < 1.0);
      // Interval end points are recorded as the next sample row.
      const bool keep = violated || (end ? last : (j + 1) % static_cast<std::size_t>(cfg.record_stride) == 0);
      if (keep) tr.rows.push_back(std::move(row));
      if (violated) {
        std::ostringstream os;
        os << "funnel violation: ||e1|| >= 1 at t = " << seg.times[j];
        fail(TraceStatus::FunnelViolation, seg.times[j], os.str());
        return tr;
      }
    }
    x = seg.states.back();
  }
  return tr;
}

Trace simulate(const SimSetup& setup) {
  if (!setup.plant) throw ConfigError("sim: setup has no plant");
  return simulate(*setup.plant, setup.reference, setup.funnel, setup.law, setup.sim);
}

VariantComparison compare_variants(const SimSetup& setup) {
  SimSetup a = setup;
  a.law.variant = LawVariant::DerivativeFree;
  SimSetup b = setup;
  b.law.variant = LawVariant::DerivativeBased;
  VariantComparison out{simulate(a), simulate(b)};
  const std::size_t ns = std::min(out.free.samples.size(), out.deriv.samples.size());
  for (std::size_t k = 0; k < ns; ++k) {
    const Vector& ua = out.free.rows[out.free.samples[k].row].u;
    const Vector& ub = out.deriv.rows[out.deriv.samples[k].row].u;
    out.max_input_diff = std::max(out.max_input_diff, (ua - ub).norm());
  }
  const std::size_t nr = std::min(out.free.rows.size(), out.deriv.rows.size());
  for (std::size_t i = 0; i < nr; ++i) {
    out.max_output_diff = std::max(out.max_output_diff, (out.free.rows[i].y - out.deriv.rows[i].y).norm());
  }
  return out;
}

const char* to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::Completed: return "completed";
    case TraceStatus::FunnelViolation: return "funnel_violation";
    case TraceStatus::NumericalBlowup: return "numerical_blowup";
  }
  return "unknown";
}

}  // namespace zoh
