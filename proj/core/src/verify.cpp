#include "zoh/verify.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "zoh/errors.hpp"

namespace zoh {

namespace {

class ViolationLog {
 public:
  void record(double t, const char* check, double value) {
    if (seen_.emplace(check, true).second) out_.push_back({t, check, value});
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::map<std::string, bool> seen_;
  std::vector<Violation> out_;
};

// e₂ at a row; false when the row lies outside the funnel.
bool row_e2(const TraceRow& row, const FunnelSpec& funnel, const ReferenceSpec& reference,
            const AlphaSpec& alpha, Vector& e2) {
  const double phi = funnel_eval(funnel, row.t).phi;
  const Vector e1 = phi * row.e;
  const double n2 = e1.squaredNorm();
  if (!(n2 < 1.0)) return false;
  const ReferenceSample ref = reference_eval(reference, row.t);
  e2 = phi * (row.ydot - ref.ydot) + alpha_eval(alpha, n2).value * e1;
  return true;
}

}  // namespace

VerificationReport check_trace(const Trace& trace, const FunnelSpec& funnel,
                               const ReferenceSpec& reference, const DesignParameters& params) {
  VerificationReport rep;
  ViolationLog log;
  const AlphaSpec& alpha = params.inputs.alpha;
  const double m_phi = params.inputs.norms.m_phi;
  const double e2_estimate_pad = trace.tau * m_phi * params.F_tilde;
  rep.input_bound = params.beta / params.lambda;
  rep.e2_estimate_slack = -INFINITY;
  bool lemma_premise = true;

  Vector e2;
  for (const TraceRow& row : trace.rows) {
    const double phi = funnel_eval(funnel, row.t).phi;
    const double e1n = phi * row.e.norm();
    rep.funnel_margin = std::max(rep.funnel_margin, e1n);
    if (!(e1n < 1.0)) log.record(row.t, checks::kFunnel, e1n);

    const double un = row.u.norm();
    rep.input_max = std::max(rep.input_max, un);
    if (un > rep.input_bound + kVerifySlack) log.record(row.t, checks::kInput, un);

    const ReferenceSample ref = reference_eval(reference, row.t);
    const double edot = (row.ydot - ref.ydot).norm();
    rep.edot_max = std::max(rep.edot_max, edot);
    if (edot > params.eps_hat + kVerifySlack) log.record(row.t, checks::kEdotBound, edot);

    if (!row_e2(row, funnel, reference, alpha, e2)) {
      lemma_premise = false;
      continue;
    }
    const double e2n = e2.norm();
    rep.e2_max_dense = std::max(rep.e2_max_dense, e2n);
    if (e2n > 1.0 + kVerifySlack) {
      log.record(row.t, checks::kE2Dense, e2n);
      lemma_premise = false;
    }
    if (lemma_premise) {
      const double off = e1n - params.eps1;
      rep.lemma_worst_offset = std::max(rep.lemma_worst_offset, off);
      if (off > kVerifySlack) {
        rep.lemma_e1e2_ok = false;
        log.record(row.t, checks::kLemmaE1E2, e1n);
      }
    }

    if (row.is_sample) {
      rep.e2_max_samples = std::max(rep.e2_max_samples, e2n);
      if (e2n > 1.0 + kVerifySlack) log.record(row.t, checks::kE2Samples, e2n);
      if (row.E.size() == e2.size()) {
        const double En = row.E.norm();
        rep.E_max = std::max(rep.E_max, En);
        if (En > params.E_hat + kVerifySlack) log.record(row.t, checks::kEBound, En);
        rep.surrogate_gap_max = std::max(rep.surrogate_gap_max, (row.E - e2).norm());
        const double slack = e2n - En - e2_estimate_pad;
        rep.e2_estimate_slack = std::max(rep.e2_estimate_slack, slack);
        if (slack > kVerifySlack) log.record(row.t, checks::kE2Estimate, e2n);
      }
    }
  }
  if (!std::isfinite(rep.e2_estimate_slack)) rep.e2_estimate_slack = 0.0;
  rep.e2_max = std::max(rep.e2_max_samples, rep.e2_max_dense);
  rep.violations = log.take();
  return rep;
}

std::string format_report(const VerificationReport& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "funnel_margin      " << r.funnel_margin << "  (< 1)\n"
     << "e2_max_samples     " << r.e2_max_samples << "  (<= 1)\n"
     << "e2_max_dense       " << r.e2_max_dense << "  (<= 1)\n"
     << "input_max          " << r.input_max << "  (<= " << r.input_bound << ")\n"
     << "lemma_e1e2         " << (r.lemma_e1e2_ok ? "ok" : "FAILED") << "  worst offset "
     << r.lemma_worst_offset << '\n'
     << "edot_max           " << r.edot_max << '\n'
     << "E_max              " << r.E_max << '\n'
     << "surrogate_gap_max  " << r.surrogate_gap_max << '\n'
     << "e2_estimate_slack  " << r.e2_estimate_slack << "  (<= 0)\n";
  if (r.violations.empty()) {
    os << "all checks passed\n";
  } else {
    for (const auto& v : r.violations) {
      os << "VIOLATION " << v.check << " at t = " << v.time << " value " << v.value << '\n';
    }
  }
  return os.str();
}

double surrogate_gap(const Trace& trace, const FunnelSpec& funnel, const ReferenceSpec& reference,
                     const AlphaSpec& alpha) {
  double gap = 0.0;
  Vector e2;
  for (const auto& s : trace.samples) {
    const TraceRow& row = trace.rows[s.row];
    if (row.E.size() == 0 || !row_e2(row, funnel, reference, alpha, e2)) continue;
    gap = std::max(gap, (row.E - e2).norm());
  }
  return gap;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("loglog_slope: values must be > 0");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConsistencyStudy surrogate_consistency_study(const SimSetup& setup, const std::vector<double>& taus) {
  if (taus.size() < 3) {
    throw std::invalid_argument("surrogate_consistency_study: at least three sampling periods required");
  }
  ConsistencyStudy study;
  std::vector<double> xs, ys;
  for (double tau : taus) {
    SimSetup s = setup;
    s.sim.tau = tau;
    const Trace tr = simulate(s);
    if (!tr.feasible()) {
      std::ostringstream os;
      os << "surrogate_consistency_study: run at tau = " << tau << " infeasible: " << tr.message;
      throw std::runtime_error(os.str());
    }
    const double gap = surrogate_gap(tr, s.funnel, s.reference, s.law.alpha);
    study.rows.push_back({tau, gap});
    xs.push_back(tau);
    ys.push_back(gap);
  }
  study.slope = loglog_slope(xs, ys);
  return study;
}

}  // namespace zoh
