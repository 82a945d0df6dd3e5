#include "generators.hpp"

#include <cmath>
#include <numbers>

#include "zoh/pipeline.hpp"

namespace zoh::test {

Vector Rng::vector(int n, double lo, double hi) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Matrix Rng::matrix(int rows, int cols, double lo, double hi) {
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = uniform(lo, hi);
  }
  return a;
}

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

LinearIOPlant random_stable_plant(Rng& rng, int m, int l) {
  const Matrix b = rng.matrix(m, m, -0.5, 0.5);
  const Matrix gamma = b * b.transpose() + Matrix::Identity(m, m) + rng.matrix(m, m, -0.1, 0.1);
  const Matrix c = rng.matrix(l, l, -0.7, 0.7);
  const Matrix k = rng.matrix(l, l, -0.5, 0.5);
  const Matrix q = -(c * c.transpose() + 0.5 * Matrix::Identity(l, l)) + (k - k.transpose());
  return LinearIOPlant(rng.matrix(m, m, -0.5, 0.5), rng.matrix(m, m, -0.5, 0.5),
                       rng.matrix(m, l, -0.5, 0.5), gamma, q, rng.matrix(l, m, -0.5, 0.5),
                       rng.vector(l, -0.2, 0.2));
}

ReferenceSpec random_reference(Rng& rng, int m) {
  std::vector<std::vector<Sinusoid>> channels(static_cast<std::size_t>(m));
  for (auto& ch : channels) {
    ch.push_back({rng.uniform(0.2, 0.5), rng.uniform(0.5, 2.0), rng.uniform(-3.0, 3.0)});
  }
  return ReferenceSpec::sinusoid_sum(std::move(channels));
}

FunnelSpec random_funnel(Rng& rng) {
  if (rng.coin()) return FunnelSpec::constant(rng.uniform(0.5, 1.5));
  return FunnelSpec::exponential_width(rng.uniform(0.0, 0.5), rng.uniform(0.5, 1.5),
                                       rng.uniform(0.8, 1.3));
}

SimSetup example_setup(double tau, double beta, LawVariant variant, int substeps, double horizon) {
  return SimSetup{std::make_shared<LinearIOPlant>(mass_on_car()),
                  ReferenceSpec::sinusoid_sum({{{0.4, std::numbers::pi / 2, 0.0}}}),
                  FunnelSpec::constant(0.08),
                  ControlLawConfig{beta, 0.7, {}, variant},
                  SimConfig{tau, horizon, substeps}};
}

DesignParameters example_design(double beta) {
  const SimSetup s = example_setup(1e-3, beta);
  PlantDesignRequest req;
  req.beta_override = beta;
  return design_for_plant(static_cast<const LinearIOPlant&>(*s.plant), s.reference, s.funnel, req)
      .params;
}

::testing::AssertionResult CompareMatrices(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return ::testing::AssertionFailure() << "size mismatch: " << a.rows() << "x" << a.cols()
                                         << " vs " << b.rows() << "x" << b.cols();
  }
  const double err = a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
  if (err > tol) {
    return ::testing::AssertionFailure() << "max abs difference " << err << " exceeds " << tol
                                         << "\n" << a << "\nvs\n" << b;
  }
  return ::testing::AssertionSuccess();
}

}  // namespace zoh::test
