// Acceptance gate. Prints one PASS/FAIL line per criterion; with arguments,
// only the listed criteria run. Exit status is non-zero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "generators.hpp"
#include "zoh/controller.hpp"
#include "zoh/design.hpp"
#include "zoh/pipeline.hpp"
#include "zoh/sim.hpp"
#include "zoh/verify.hpp"

namespace zoh {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome example_one() {
  const auto t0 = Clock::now();
  const SimSetup s = test::example_setup(1.8e-3, 25.2);
  const Trace tr = simulate(s);
  const double secs = seconds_since(t0);
  const VerificationReport r = check_trace(tr, s.funnel, s.reference, test::example_design(25.2));
  const bool pass = tr.feasible() && r.funnel_margin < 1.0 && r.input_max <= 36.0 && secs < 5.0;
  return {pass, fmt("status=%s funnel_margin=%.6g input_max=%.6g (<= 36) runtime=%.3gs", to_string(tr.status),
                    r.funnel_margin, r.input_max, secs)};
}

Outcome example_two() {
  const VariantComparison fine = compare_variants(test::example_setup(1.8e-3, 25.2));
  const SimSetup s = test::example_setup(0.07, 5.0);
  const VariantComparison coarse = compare_variants(s);
  const VerificationReport r = check_trace(coarse.free, s.funnel, s.reference, test::example_design(5.0));
  const bool contained = coarse.free.feasible() && r.funnel_margin < 1.0;
  const bool differ = coarse.max_input_diff > 10.0 * fine.max_input_diff;
  std::string detail = fmt("free=%s deriv=%s funnel_margin=%.6g input_diff=%.6g vs 10x%.6g",
                           to_string(coarse.free.status), to_string(coarse.deriv.status), r.funnel_margin,
                           coarse.max_input_diff, fine.max_input_diff);
  if (!coarse.free.feasible()) detail += fmt(" violation_time=%.6g", coarse.free.violation_time);
  return {contained && coarse.both_feasible() && differ, detail};
}

Outcome variant_agreement() {
  std::vector<double> diffs;
  bool feasible = true;
  for (double tau : {3.6e-3, 1.8e-3, 9e-4}) {
    const VariantComparison c = compare_variants(test::example_setup(tau, 25.2));
    feasible = feasible && c.both_feasible();
    diffs.push_back(c.max_input_diff);
  }
  const double r1 = diffs[0] / diffs[1];
  const double r2 = diffs[1] / diffs[2];
  const auto in_band = [](double r) { return r >= 1.6 && r <= 2.4; };
  return {feasible && in_band(r1) && in_band(r2),
          fmt("diffs=%.6g,%.6g,%.6g ratios=%.4g,%.4g (in [1.6,2.4])", diffs[0], diffs[1], diffs[2], r1, r2)};
}

Outcome closed_form() {
  DesignInputs in;
  in.norms = funnel_norms(FunnelSpec::constant(0.5));
  in.bounds = {1.0, 1.0, 1.0};
  in.e1_initial_norm = 0.0;
  const DesignParameters p = evaluate_design(in);
  // ξ² + ξ − 1 = 0
  const double a = 1.0, b = 1.0, c = -1.0;
  const double xi = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  const double gamma_bar = 4.0 + 2.0 / xi;
  const double dx = std::abs(p.xi - xi);
  const double dg = std::abs(p.gamma_bar - gamma_bar);
  return {dx <= 1e-10 && dg <= 1e-10, fmt("xi=%.17g |dxi|=%.3g gamma_bar=%.17g |dgamma|=%.3g", p.xi, dx,
                                          p.gamma_bar, dg)};
}

// Shared by criteria 5 and 6.
struct TheoremRun {
  Trace trace;
  VerificationReport report;
  DesignParameters params;
};

const std::vector<TheoremRun>& theorem_runs() {
  static const std::vector<TheoremRun> runs = [] {
    std::vector<TheoremRun> out;
    test::Rng rng(12345);
    for (int i = 0; i < 50; ++i) {
      const int m = rng.integer(1, 2);
      const int l = rng.integer(1, 3);
      const LinearIOPlant plant = test::random_stable_plant(rng, m, l);
      const ReferenceSpec ref = test::random_reference(rng, m);
      const FunnelSpec funnel = test::random_funnel(rng);
      PlantDesignRequest req;
      req.lambda = rng.uniform(0.4, 0.8);
      req.beta_margin = 1.01;
      const PlantDesign d = design_for_plant(plant, ref, funnel, req);
      const DesignParameters p = derive_design_parameters(d.params.inputs);
      const ControlLawConfig law{p.beta, p.lambda, {}, LawVariant::DerivativeFree};
      Trace tr = simulate(plant, ref, funnel, law, SimConfig{p.tau_max, 1.0, 4});
      VerificationReport rep = check_trace(tr, funnel, ref, p);
      out.push_back({std::move(tr), std::move(rep), p});
    }
    return out;
  }();
  return runs;
}

Outcome theorem_suite() {
  const auto t0 = Clock::now();
  int pass = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < 50; ++i) {
    const TheoremRun& run = theorem_runs()[i];
    bool ok = run.trace.feasible();
    for (const TraceRow& r : run.trace.rows) {
      ok = ok && r.norm_e1 < 1.0;
      if (r.is_sample) ok = ok && r.norm_e2 <= 1.0 + 1e-9;
    }
    pass += ok ? 1 : 0;
    if (!ok && first_failure.empty()) first_failure = fmt(" first_failure=%zu", i);
  }
  const double secs = seconds_since(t0);
  return {pass == 50 && secs < 60.0, fmt("%d/50 runs inside the funnel with ||e2(t_k)|| <= 1 runtime=%.3gs", pass,
                                         secs) + first_failure};
}

Outcome appendix_bounds() {
  std::vector<std::pair<std::string, VerificationReport>> reports;
  {
    const SimSetup s = test::example_setup(1.8e-3, 25.2);
    reports.emplace_back("example1", check_trace(simulate(s), s.funnel, s.reference, test::example_design(25.2)));
  }
  for (std::size_t i = 0; i < theorem_runs().size(); ++i) {
    if (theorem_runs()[i].trace.feasible()) reports.emplace_back(fmt("random%zu", i), theorem_runs()[i].report);
  }
  int bad = 0;
  std::string first;
  double worst_edot = 0.0, worst_E = 0.0, worst_est = -INFINITY;
  for (const auto& [name, r] : reports) {
    for (const Violation& v : r.violations) {
      const std::string c = v.check;
      if (c == checks::kEdotBound || c == checks::kEBound || c == checks::kE2Estimate) {
        ++bad;
        if (first.empty()) first = " first=" + name + ":" + c;
      }
    }
    worst_E = std::max(worst_E, r.E_max);
    worst_edot = std::max(worst_edot, r.edot_max);
    worst_est = std::max(worst_est, r.e2_estimate_slack);
  }
  return {bad == 0, fmt("%zu feasible traces, %d bound violations, max e2 estimate slack=%.3g", reports.size(), bad,
                        worst_est) + first};
}

Outcome surrogate_consistency() {
  const ConsistencyStudy st = surrogate_consistency_study(test::example_setup(1e-2, 25.2, LawVariant::DerivativeFree, 4),
                                                          {1e-2, 1e-3, 1e-4});
  std::string gaps;
  for (const auto& r : st.rows) gaps += fmt("%s%.3g", gaps.empty() ? "" : ",", r.gap);
  return {std::abs(st.slope - 1.0) <= 0.15, fmt("slope=%.4g (1 +- 0.15) gaps=%s over tau=1e-2..1e-4", st.slope,
                                                gaps.c_str())};
}

Outcome integrator_order() {
  // ÿ = −y + u with u held at 0.5; y(t) = u + (y₀ − u)·cos t.
  const LinearIOPlant plant(Matrix::Constant(1, 1, -1.0), Matrix::Zero(1, 1), Matrix(1, 0), Matrix::Identity(1, 1),
                            Matrix(0, 0), Matrix(0, 1), Vector());
  const Vector u = Vector::Constant(1, 0.5);
  const PlantState x0{Vector::Constant(1, 1.0), Vector::Zero(1), Vector()};
  const double t1 = 2.0;
  auto err = [&](int n) {
    const PlantState s = integrate_hold(plant, x0, u, 0.0, t1, n).states.back();
    return std::hypot(s.y[0] - (0.5 + 0.5 * std::cos(t1)), s.ydot[0] + 0.5 * std::sin(t1));
  };
  bool ok = true;
  std::string ratios;
  for (int n : {4, 8, 16, 32}) {
    const double r = err(n) / err(2 * n);
    ok = ok && std::abs(r - 16.0) <= 16.0 * 0.2;
    ratios += fmt("%s%.4g", ratios.empty() ? "" : ",", r);
  }
  return {ok, "error ratios per halving=" + ratios + " (16 +- 20%)"};
}

Outcome input_bound_fuzz() {
  test::Rng rng(20240917);
  long exceptions = 0;
  double worst = -INFINITY;
  for (long i = 0; i < 1000000; ++i) {
    const int m = rng.integer(1, 4);
    Vector E = rng.vector(m, -1.0, 1.0) * rng.log_uniform(1e-6, 1e6);
    ControlLawConfig cfg;
    cfg.beta = rng.log_uniform(1e-3, 1e4);
    cfg.lambda = rng.uniform(1e-3, 1.0 - 1e-3);
    try {
      const LawOutput out = zoh_law(E, cfg);
      worst = std::max(worst, out.u.norm() - (cfg.beta / cfg.lambda + 1e-12));
    } catch (const std::exception&) {
      ++exceptions;
    }
  }
  return {exceptions == 0 && worst <= 0.0,
          fmt("1e6 draws, exceptions=%ld, max(||u|| - beta/lambda - 1e-12)=%.3g", exceptions, worst)};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<Outcome()>>> all = {
      {1, {"example-1 reproduction", example_one}},
      {2, {"example-2 reproduction", example_two}},
      {3, {"variant agreement at fine sampling", variant_agreement}},
      {4, {"design closed form", closed_form}},
      {5, {"randomized feasibility suite", theorem_suite}},
      {6, {"auxiliary bounds on feasible traces", appendix_bounds}},
      {7, {"surrogate consistency", surrogate_consistency}},
      {8, {"integrator order", integrator_order}},
      {9, {"input bound fuzz", input_bound_fuzz}},
  };
  return all;
}

}  // namespace
}  // namespace zoh

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (!zoh::criteria().contains(c)) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(c);
  }
  if (selected.empty()) {
    for (const auto& [c, entry] : zoh::criteria()) selected.push_back(c);
  }
  int failed = 0;
  for (int c : selected) {
    const auto& [name, fn] = zoh::criteria().at(c);
    zoh::Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %d: %s  %s: %s\n", c, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
