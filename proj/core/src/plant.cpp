#include "zoh/plant.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "zoh/errors.hpp"
#include "zoh/linalg.hpp"

namespace zoh {

namespace {

void expect_shape(const Matrix& a, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (a.rows() != rows || a.cols() != cols) {
    std::ostringstream os;
    os << "plant: " << name << " must be " << rows << "x" << cols << ", got " << a.rows() << "x"
       << a.cols();
    throw ConfigError(os.str());
  }
}

}  // namespace

LinearIOPlant::LinearIOPlant(Matrix r0, Matrix r1, Matrix s, Matrix gamma, Matrix q, Matrix p,
                             Vector eta0)
    : r0_(std::move(r0)),
      r1_(std::move(r1)),
      s_(std::move(s)),
      gamma_(std::move(gamma)),
      q_(std::move(q)),
      p_(std::move(p)),
      eta0_(std::move(eta0)) {
  const Eigen::Index m = gamma_.rows();
  const Eigen::Index l = q_.rows();
  if (m == 0) throw ConfigError("plant: output dimension must be >= 1");
  expect_shape(gamma_, m, m, "Gamma");
  expect_shape(r0_, m, m, "R0");
  expect_shape(r1_, m, m, "R1");
  expect_shape(s_, m, l, "S");
  expect_shape(q_, l, l, "Q");
  expect_shape(p_, l, m, "P");
  if (eta0_.size() != l) throw ConfigError("plant: eta0 length must equal the internal dimension");
  d_ = Matrix::Zero(m, 0);
  for (const Matrix* a : {&r0_, &r1_, &s_, &gamma_, &q_, &p_}) {
    if (!a->allFinite()) throw ConfigError("plant: matrices must be finite");
  }
  if (l > 0 && !linalg::is_hurwitz(q_)) {
    throw AssumptionViolation("plant: internal dynamics matrix Q is not Hurwitz");
  }
  if (!(linalg::min_symmetric_eigenvalue(gamma_) > 0.0)) {
    throw AssumptionViolation("plant: symmetric part of Gamma is not positive definite");
  }
}

LinearIOPlant LinearIOPlant::with_disturbance(Matrix d,
                                              std::vector<std::vector<Sinusoid>> channels) const {
  expect_shape(d, gamma_.rows(), static_cast<Eigen::Index>(channels.size()), "D");
  LinearIOPlant out = *this;
  out.d_ = std::move(d);
  out.dist_ = std::move(channels);
  return out;
}

LinearIOPlant LinearIOPlant::with_initial_internal(Vector eta0) const {
  if (eta0.size() != q_.rows()) {
    throw ConfigError("plant: eta0 length must equal the internal dimension");
  }
  LinearIOPlant out = *this;
  out.eta0_ = std::move(eta0);
  return out;
}

Vector LinearIOPlant::drift(const Vector& d, const Vector& y, const Vector& ydot,
                            const Vector& eta) const {
  Vector f = r0_ * y + r1_ * ydot;
  if (s_.cols() > 0) f.noalias() += s_ * eta;
  if (d_.cols() > 0) f.noalias() += d_ * d;
  return f;
}

Matrix LinearIOPlant::gain(const Vector&, const Vector&, const Vector&, const Vector&) const {
  return gamma_;
}

Vector LinearIOPlant::internal(const Vector& eta, const Vector& y, const Vector&) const {
  if (q_.rows() == 0) return Vector(0);
  return q_ * eta + p_ * y;
}

Vector LinearIOPlant::disturbance(double t) const {
  Vector d = Vector::Zero(static_cast<Eigen::Index>(dist_.size()));
  for (std::size_t i = 0; i < dist_.size(); ++i) {
    for (const auto& s : dist_[i]) d[static_cast<Eigen::Index>(i)] += s.amplitude * std::sin(s.omega * t + s.phase);
  }
  return d;
}

double LinearIOPlant::disturbance_bound() const {
  double sq = 0.0;
  for (const auto& ch : dist_) {
    double b = 0.0;
    for (const auto& s : ch) b += std::abs(s.amplitude);
    sq += b * b;
  }
  return std::sqrt(sq);
}

LinearIOPlant mass_on_car(const MassOnCarParams& p) {
  if (!(p.m1 > 0.0) || !(p.m2 > 0.0) || !(p.k > 0.0) || !(p.d > 0.0)) {
    throw ConfigError("mass_on_car: m1, m2, k, d must be > 0");
  }
  if (!(p.theta > 0.0 && p.theta < std::numbers::pi / 2.0)) {
    throw ConfigError("mass_on_car: theta must lie strictly inside (0, pi/2)");
  }
  // Equations of motion in (z, s):
  //   (m1 + m2)·z̈ + m2·c·s̈ = u
  //   m2·c·z̈ + m2·s̈ + d·ṡ + k·s = 0
  // ṡ + c·ż is free of u, which yields the internal coordinates.
  const double c = std::cos(p.theta);
  const double sig = std::sin(p.theta) * std::sin(p.theta);
  const double den = p.m1 + p.m2 * sig;
  const double mu = p.d / p.m2;
  const double nu = p.k / p.m2;

  Matrix r0(1, 1), r1(1, 1), s(1, 2), gamma(1, 1), q(2, 2), pm(2, 1);
  if (p.output == MassOnCarOutput::Car) {
    r0 << c * c * (p.d * mu - p.k) / den;
    r1 << -p.d * c * c / den;
    s << c * p.k / den, c * p.d / den;
    gamma << 1.0 / den;
    q << 0.0, 1.0, -nu, -mu;
    pm << mu * c, c * (nu - mu * mu);
  } else {
    const double kk = -p.m1 * c / (den * p.m2);
    r0 << kk * c * (p.d * mu / (sig * sig) - p.k / sig);
    r1 << -kk * p.d * c / sig;
    s << kk * p.k, kk * p.d / sig;
    gamma << sig / den;
    q << 0.0, 1.0 / sig, -nu, -mu / sig;
    pm << mu * c / (sig * sig), c * (nu / sig - mu * mu / (sig * sig));
  }
  return LinearIOPlant(r0, r1, s, gamma, q, pm, Vector::Zero(2));
}

Vector mass_on_car_internal_state(const MassOnCarParams& p, double y, double ydot, double s,
                                  double sdot) {
  const double c = std::cos(p.theta);
  const double sig = std::sin(p.theta) * std::sin(p.theta);
  const double mu = p.d / p.m2;
  Vector eta(2);
  if (p.output == MassOnCarOutput::Car) {
    eta << s + c * y, sdot + c * ydot - mu * c * y;
  } else {
    eta << s + (c / sig) * y, sig * sdot + c * ydot - (mu * c / sig) * y;
  }
  return eta;
}

WorstCaseBounds worst_case_bounds(const LinearIOPlant& plant, double y_bound, double ydot_bound,
                                  double eta_bound) {
  if (!(y_bound >= 0.0) || !(ydot_bound >= 0.0) || !(eta_bound >= 0.0)) {
    throw std::domain_error("worst_case_bounds: operating-set bounds must be >= 0");
  }
  WorstCaseBounds b{};
  b.f_max = linalg::spectral_norm(plant.r0()) * y_bound +
            linalg::spectral_norm(plant.r1()) * ydot_bound +
            linalg::spectral_norm(plant.s()) * eta_bound +
            linalg::spectral_norm(plant.d()) * plant.disturbance_bound();
  b.g_max = linalg::spectral_norm(plant.gamma());
  b.g_min = linalg::min_symmetric_eigenvalue(plant.gamma());
  if (!(b.g_min > 0.0)) {
    throw AssumptionViolation("worst_case_bounds: gain is not strictly positive definite");
  }
  return b;
}

double bibs_state_bound(const Matrix& q, const Matrix& p, const Vector& eta0, double y_bound) {
  if (q.rows() == 0) return 0.0;
  const auto est = linalg::exponential_estimate(q);
  return est.gain * eta0.norm() + est.gain * linalg::spectral_norm(p) * y_bound / est.rate;
}

}  // namespace zoh
