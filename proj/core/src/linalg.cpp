#include "zoh/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "zoh/errors.hpp"

namespace zoh::linalg {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double min_symmetric_eigenvalue(const Matrix& a) {
  if (a.rows() != a.cols() || a.size() == 0) {
    throw std::invalid_argument("min_symmetric_eigenvalue: matrix must be square and non-empty");
  }
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_abscissa(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("spectral_abscissa: matrix must be square");
  if (a.size() == 0) return -INFINITY;
  Eigen::EigenSolver<Matrix> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

bool is_hurwitz(const Matrix& a) { return spectral_abscissa(a) < 0.0; }

Matrix solve_continuous_lyapunov(const Matrix& a, const Matrix& c) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || c.rows() != n || c.cols() != n) {
    throw std::invalid_argument("solve_continuous_lyapunov: dimension mismatch");
  }
  if (!is_hurwitz(a)) throw AssumptionViolation("solve_continuous_lyapunov: matrix is not Hurwitz");
  // vec(AᵀX + XA) = (I ⊗ Aᵀ + Aᵀ ⊗ I) vec(X), column-major vec.
  const Matrix at = a.transpose();
  Matrix k = Matrix::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k.block(j * n, j * n, n, n) += at;
    for (Eigen::Index i = 0; i < n; ++i) {
      k.block(i * n, j * n, n, n).diagonal().array() += at(i, j);
    }
  }
  const Vector rhs = -Eigen::Map<const Vector>(c.data(), n * n);
  const Vector x = k.colPivHouseholderQr().solve(rhs);
  Matrix out = Eigen::Map<const Matrix>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

ExponentialEstimate exponential_estimate(const Matrix& a) {
  const Matrix x = solve_continuous_lyapunov(a, Matrix::Identity(a.rows(), a.cols()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  return {std::sqrt(lmax / lmin), 1.0 / (2.0 * lmax)};
}

}  // namespace zoh::linalg
