#include <algorithm>
#include <cmath>
#include <numeric>

#include "hierlyap/errors.hpp"
#include "hierlyap/kernels.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::numerics {
namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

}  // namespace

SymEig sym_eig(const Matrix& s) {
  if (!s.is_square()) throw DimensionError("sym_eig: matrix is not square");
  const std::size_t n = s.rows();
  const double scale = std::max(1.0, frobenius_norm(s));
  if (asymmetry(s) > kSymmetryTol * scale) throw DimensionError("sym_eig: matrix is not symmetric");

  Matrix a = symmetrized(s);
  // Rows of v accumulate the rotations; row i ends up as eigenvector i.
  Matrix v = Matrix::identity(n);
  const auto& k = kernels::active();
  const double target = std::numeric_limits<double>::epsilon() * frobenius_norm(a);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, tau) / (std::fabs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double sn = t * c;
        k.rotate(a.row(p).data(), a.row(q).data(), n, c, sn);
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - sn * aiq;
          a(i, q) = sn * aip + c * aiq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        k.rotate(v.row(p).data(), v.row(q).data(), n, c, sn);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymEig out;
  out.eigenvalues.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    out.eigenvalues[col] = a(order[col], order[col]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, col) = v(order[col], r);
  }
  if (n > 0) {
    out.min = out.eigenvalues.front();
    out.max = out.eigenvalues.back();
  }
  return out;
}

double spectral_norm(const Matrix& x) {
  if (x.empty()) return 0.0;
  const Matrix xt = x.transpose();
  const Matrix gram = x.rows() <= x.cols() ? x * xt : xt * x;
  return std::sqrt(std::max(0.0, sym_eig(gram).max));
}

double matrix_measure_inf(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("matrix_measure_inf: matrix is not square");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double aii = a(i, i);
    worst = std::max(worst, kernels::abs_sum(a.row(i)) - std::fabs(aii) + aii);
  }
  return worst;
}

}  // namespace hierlyap::numerics
