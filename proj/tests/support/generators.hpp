#pragma once

// Hand-rolled random generators and shared fixtures for the test suites.

#include <cstdint>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "zoh/design.hpp"
#include "zoh/plant.hpp"
#include "zoh/sim.hpp"

namespace zoh::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return integer(0, 1) == 1; }
  Vector vector(int n, double lo, double hi);
  Matrix matrix(int rows, int cols, double lo, double hi);
  /// Log-uniform on [lo, hi].
  double log_uniform(double lo, double hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Γ = BBᵀ + I plus a small perturbation, Q = −(CCᵀ + ½I) + skew part.
LinearIOPlant random_stable_plant(Rng& rng, int m, int l);
ReferenceSpec random_reference(Rng& rng, int m);
FunnelSpec random_funnel(Rng& rng);

/// Mass-on-car defaults tracking 0.4·sin(π/2·t) inside a tube of radius 0.08.
SimSetup example_setup(double tau, double beta, LawVariant variant = LawVariant::DerivativeFree,
                       int substeps = 20, double horizon = 2.0);

/// Design constants for the example setup with β replaced by `beta`.
DesignParameters example_design(double beta);

::testing::AssertionResult CompareMatrices(const Matrix& a, const Matrix& b, double tol);

}  // namespace zoh::test
