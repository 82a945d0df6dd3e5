#include "zoh/design.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "zoh/errors.hpp"
#include "generators.hpp"

namespace zoh {
namespace {

DesignInputs tube_inputs() {
  DesignInputs in;
  in.norms = funnel_norms(FunnelSpec::constant(0.08));
  in.bounds = {2.0, 1.0, 1.0};
  in.yref_acc_bound = 0.986960;
  in.lambda = 0.7;
  in.beta_margin = 1.0;
  return in;
}

DesignInputs random_inputs(test::Rng& rng) {
  DesignInputs in;
  in.norms = funnel_norms(rng.coin() ? FunnelSpec::constant(rng.log_uniform(0.05, 2.0))
                                     : FunnelSpec::exponential_width(rng.uniform(0, 2),
                                                                     rng.uniform(0, 3),
                                                                     rng.log_uniform(0.05, 2.0)));
  const double g_min = rng.log_uniform(0.1, 5.0);
  in.bounds = {rng.log_uniform(1e-3, 50.0), g_min * rng.uniform(1.0, 4.0), g_min};
  in.yref_acc_bound = rng.uniform(0.0, 5.0);
  in.lambda = rng.uniform(0.05, 0.95);
  in.beta_margin = rng.uniform(1.001, 2.0);
  return in;
}

GTEST_TEST(SolveXiTest, ClosedForms) {
  EXPECT_NEAR(solve_xi(AlphaSpec{}, 0.0), (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(solve_xi(AlphaSpec{}, 1.0), 0.78077640640441514, 1e-15);
  const double xi = solve_xi(AlphaSpec{}, 0.0);
  EXPECT_NEAR(alpha_eval(AlphaSpec{}, xi * xi).value * xi, 1.0, 1e-15);
}

GTEST_TEST(SolveXiTest, ResidualOverRange) {
  test::Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    const double r = i < 10 ? i : rng.uniform(0.0, 100.0);
    const double xi = solve_xi(AlphaSpec{}, r);
    ASSERT_GT(xi, 0.0);
    ASSERT_LT(xi, 1.0);
    ASSERT_LT(std::abs(alpha_eval(AlphaSpec{}, xi * xi).value * xi - (1.0 + r)), 1e-10) << r;
  }
}

GTEST_TEST(SolveXiTest, RejectsNegativeRatio) {
  EXPECT_THROW(solve_xi(AlphaSpec{}, -0.1), std::domain_error);
}

GTEST_TEST(DesignTest, ConstantTubeValues) {
  const DesignParameters p = derive_design_parameters(tube_inputs());
  EXPECT_NEAR(p.xi, 0.61803398874989485, 1e-15);
  EXPECT_EQ(p.eps1, p.xi);
  EXPECT_NEAR(p.alpha_xi, 1.0, 1e-14);
  EXPECT_NEAR(p.gamma_bar, 4.0 + 2.0 / p.xi, 1e-12);
  EXPECT_NEAR(p.gamma_bar, 7.2360679774997897, 1e-12);
  EXPECT_NEAR(p.kappa0, 44.57306797749979, 1e-11);
  EXPECT_NEAR(p.eps_hat, 25.0, 1e-12);
  EXPECT_NEAR(p.E_hat, 313.5, 1e-10);
  EXPECT_NEAR(p.beta, 1114.3266994374947, 1e-9);
  EXPECT_EQ(p.beta, p.beta_min);
  EXPECT_NEAR(p.F_tilde, 9950.3455306919173, 1e-8);
  EXPECT_NEAR(p.kappa1, 13973.656810946184, 1e-8);
  EXPECT_NEAR(p.tau_terms[0], 2.8394772860522438e-5, 1e-17);
  EXPECT_NEAR(p.tau_terms[1], 2.2827186230723573e-7, 1e-19);
  EXPECT_NEAR(p.tau_terms[2], 2.4109429382194593e-6, 1e-18);
  EXPECT_EQ(p.binding_term, 1);
  EXPECT_EQ(p.tau_max, p.tau_terms[1]);
  EXPECT_TRUE(p.feasible());
}

GTEST_TEST(DesignTest, TauMaxIsMinimumOfTerms) {
  test::Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const DesignParameters p = evaluate_design(random_inputs(rng));
    const double mn = std::min({p.tau_terms[0], p.tau_terms[1], p.tau_terms[2]});
    ASSERT_EQ(p.tau_max, mn);
    ASSERT_EQ(p.tau_terms[static_cast<std::size_t>(p.binding_term)], mn);
    ASSERT_GE(p.beta, p.beta_min);
    ASSERT_LT(p.eps1, 1.0);
  }
}

GTEST_TEST(DesignTest, ActivationTermVanishesAsLambdaApproachesOne) {
  DesignInputs in = tube_inputs();
  double prev = INFINITY;
  for (double lam : {0.99, 0.999, 0.9999, 0.99999}) {
    in.lambda = lam;
    const DesignParameters p = evaluate_design(in);
    EXPECT_GT(p.tau_terms[2], 0.0);
    EXPECT_LT(p.tau_terms[2], prev);
    prev = p.tau_terms[2];
  }
  EXPECT_LT(prev, 2e-10);
}

GTEST_TEST(DesignTest, ActivationTermBindsNearOne) {
  DesignInputs in;
  in.norms = funnel_norms(FunnelSpec::constant(1.0));
  in.bounds = {0.0, 1.0, 1.0};
  in.lambda = 0.999;
  in.beta_margin = 1.01;
  const DesignParameters p = derive_design_parameters(in);
  EXPECT_EQ(p.binding_term, 2);
  const auto trail = explain_tau(p);
  ASSERT_EQ(trail.size(), 3u);
  EXPECT_TRUE(trail[2].binding);
  EXPECT_FALSE(trail[0].binding);
  EXPECT_EQ(trail[2].label, "activation");
  for (const auto& c : trail) EXPECT_GT(c.value, 0.0);
  EXPECT_EQ(format_tau_report(p), format_tau_report(p));
}

GTEST_TEST(DesignTest, InfeasibleTermNamed) {
  // A constant funnel of radius 1 has M·inf φ = 1, so with margin 1 the
  // switching numerator is exactly zero.
  DesignInputs in;
  in.norms = funnel_norms(FunnelSpec::constant(1.0));
  in.bounds = {1.0, 1.0, 1.0};
  in.beta_margin = 1.0;
  try {
    derive_design_parameters(in);
    FAIL() << "expected InfeasibleDesign";
  } catch (const InfeasibleDesign& e) {
    EXPECT_EQ(e.term(), 0);
    EXPECT_NE(std::string(e.what()).find("switching"), std::string::npos);
  }
  EXPECT_NO_THROW(evaluate_design(in));
  EXPECT_FALSE(evaluate_design(in).feasible());
}

GTEST_TEST(DesignTest, BetaOverrideCanBreakFeasibility) {
  const DesignParameters p = evaluate_design(tube_inputs(), 7.0);
  EXPECT_TRUE(p.beta_overridden);
  EXPECT_EQ(p.beta, 7.0);
  EXPECT_LT(p.beta, p.beta_min);
  EXPECT_LT(p.tau_terms[0], 0.0);
  EXPECT_FALSE(p.feasible());
}

GTEST_TEST(DesignTest, InitialErrorOutsideFunnel) {
  DesignInputs in = tube_inputs();
  in.e1_initial_norm = 1.0;
  try {
    evaluate_design(in);
    FAIL() << "expected InfeasibleDesign";
  } catch (const InfeasibleDesign& e) {
    EXPECT_EQ(e.term(), -1);
  }
  in.e1_initial_norm = 0.9;
  EXPECT_EQ(evaluate_design(in).eps1, 0.9);
}

GTEST_TEST(DesignTest, RejectsInvalidInputs) {
  DesignInputs in = tube_inputs();
  in.lambda = 1.0;
  EXPECT_THROW(evaluate_design(in), ConfigError);
  in = tube_inputs();
  in.beta_margin = 0.9;
  EXPECT_THROW(evaluate_design(in), ConfigError);
  in = tube_inputs();
  in.bounds = {1.0, 1.0, 2.0};
  EXPECT_THROW(evaluate_design(in), ConfigError);
  in = tube_inputs();
  in.bounds = {1.0, 1.0, 0.0};
  EXPECT_THROW(evaluate_design(in), ConfigError);
  EXPECT_THROW(evaluate_design(tube_inputs(), -1.0), ConfigError);
}

GTEST_TEST(DesignTest, TauMaxMonotoneInBounds) {
  test::Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const DesignInputs base = random_inputs(rng);
    const double t = evaluate_design(base).tau_max;
    const double s = rng.uniform(1.0, 3.0);

    DesignInputs f = base;
    f.bounds.f_max *= s;
    ASSERT_LE(evaluate_design(f).tau_max, t * (1 + 1e-12) + 1e-300) << "f_max, trial " << i;

    DesignInputs g = base;
    g.bounds.g_max *= s;
    ASSERT_LE(evaluate_design(g).tau_max, t * (1 + 1e-12) + 1e-300) << "g_max, trial " << i;

    DesignInputs h = base;
    h.bounds.g_min = std::min(h.bounds.g_max, h.bounds.g_min * s);
    ASSERT_GE(evaluate_design(h).tau_max, t * (1 - 1e-12) - 1e-300) << "g_min, trial " << i;
  }
}

GTEST_TEST(DesignTest, SwitchingNumeratorPositive) {
  test::Rng rng(123);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const DesignInputs in = random_inputs(rng);
    if (!(in.norms.m_phi * in.norms.inf_phi > 1.0)) continue;
    const DesignParameters p = evaluate_design(in);
    ASSERT_GT(in.norms.inf_phi * in.bounds.g_min * p.beta - 2.0 * p.kappa0, 0.0);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

GTEST_TEST(DesignTest, GrowthTermUnderDoubledKappa0) {
  // κ₀/(κ₀ + B)² with B = M·β·g_max falls under κ₀ → 2κ₀ iff B < √2·κ₀.
  test::Rng rng(8);
  int falls = 0;
  int rises = 0;
  for (int i = 0; i < 2000; ++i) {
    DesignInputs in = random_inputs(rng);
    const double beta = rng.log_uniform(1e-3, 1e3);
    const DesignParameters p = evaluate_design(in, beta);
    in.bounds.f_max += p.kappa0 / in.norms.m_phi;
    const DesignParameters q = evaluate_design(in, beta);
    ASSERT_NEAR(q.kappa0, 2.0 * p.kappa0, 1e-9 * p.kappa0);
    const double b = in.norms.m_phi * beta * in.bounds.g_max;
    const double gap = b / (std::sqrt(2.0) * p.kappa0);
    if (gap < 0.999) {
      ASSERT_LT(q.tau_terms[1], p.tau_terms[1]) << "trial " << i;
      ++falls;
    } else if (gap > 1.001) {
      ASSERT_GT(q.tau_terms[1], p.tau_terms[1]) << "trial " << i;
      ++rises;
    }
  }
  EXPECT_GT(falls, 100);
  EXPECT_GT(rises, 100);
}

}  // namespace
}  // namespace zoh
