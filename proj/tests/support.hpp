#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "hierlyap/matrix.hpp"
#include "hierlyap/model.hpp"

namespace hierlyap::test {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }

  Matrix matrix(std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (double& v : m.data()) v = uniform(lo, hi);
    return m;
  }

  Vector vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  // Symmetric positive definite with eigenvalues in [lo, hi].
  Matrix spd(std::size_t n, double lo = 0.2, double hi = 3.0) {
    const Eigen::MatrixXd g = to_eigen(matrix(n, n));
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd d(n);
    for (std::size_t i = 0; i < n; ++i) d(i) = uniform(lo, hi);
    const Eigen::MatrixXd s = q * d.asDiagonal() * q.transpose();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (s(i, j) + s(j, i));
    return out;
  }

  // Random matrix shifted left until every eigenvalue has real part <= -margin.
  Matrix hurwitz(std::size_t n, double margin = 0.5) {
    Matrix a = matrix(n, n, -2.0, 2.0);
    const double abscissa = to_eigen(a).eigenvalues().real().maxCoeff();
    const double shift = abscissa + margin + uniform(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= shift;
    return a;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Scalar subsystem x' = a x + f(x) + u about x* = 0.
inline model::Subsystem scalar_subsystem(double a, double d, std::vector<model::Monomial> terms = {},
                                         std::optional<double> p = std::nullopt) {
  model::Subsystem s;
  s.A = Matrix{{a}};
  s.B = {1.0};
  s.C = {1.0};
  s.f = model::Polynomial(1, std::move(terms));
  s.x_star = {0.0};
  s.d = d;
  if (p) s.P = Matrix{{*p}};
  return s;
}

inline model::Coupling constant_coupling(std::size_t from, std::size_t to, double value) {
  return {from, to, model::Constant{value}, std::abs(value), from == to};
}

}  // namespace hierlyap::test
