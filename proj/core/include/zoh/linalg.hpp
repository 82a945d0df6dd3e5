#pragma once

#include "zoh/types.hpp"

namespace zoh::linalg {

/// Operator 2-norm, via the largest eigenvalue of AᵀA.
double spectral_norm(const Matrix& a);

/// Smallest eigenvalue of the symmetric part (A + Aᵀ)/2.
double min_symmetric_eigenvalue(const Matrix& a);

/// Largest real part over the eigenvalues of A.
double spectral_abscissa(const Matrix& a);

bool is_hurwitz(const Matrix& a);

/// Solves AᵀX + XA = −C for symmetric C by vectorisation. A must be Hurwitz
/// (then the solution is unique and symmetric positive definite for C > 0).
Matrix solve_continuous_lyapunov(const Matrix& a, const Matrix& c);

/// Constants with ‖exp(A t)‖ ≤ gain·exp(−rate·t) for all t ≥ 0.
struct ExponentialEstimate {
  double gain;
  double rate;
};

/// Lyapunov-based estimate from AᵀX + XA = −I:
/// gain = √cond(X), rate = 1/(2·λ_max(X)).
ExponentialEstimate exponential_estimate(const Matrix& a);

}  // namespace zoh::linalg
