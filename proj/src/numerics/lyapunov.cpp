#include <algorithm>
#include <cmath>

#include "hierlyap/errors.hpp"
#include "hierlyap/kernels.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::numerics {

std::vector<double> lu_solve(Matrix a, Vector b) {
  if (!a.is_square() || a.rows() != b.size()) throw DimensionError("lu_solve: shape mismatch");
  const std::size_t n = a.rows();
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return {};

  const auto& k = kernels::active();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (std::fabs(a(piv, col)) <= 1e-13 * scale) return {};
    if (piv != col) {
      std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(piv).begin());
      std::swap(b[col], b[piv]);
    }
    const double inv = 1.0 / a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) * inv;
      if (f == 0.0) continue;
      k.axpy(-f, a.row(col).data() + col, a.row(r).data() + col, n - col);
      b[r] -= f * b[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    const double tail = k.dot(a.row(i).data() + i + 1, x.data() + i + 1, n - i - 1);
    x[i] = (b[i] - tail) / a(i, i);
  }
  return x;
}

namespace {

// A^T P + P A
Matrix lyapunov_operator(const Matrix& a, const Matrix& p) {
  const Matrix ap = a.transpose() * p;
  return ap + ap.transpose();
}

Matrix unvec(const Vector& x, std::size_t n) {
  Matrix p(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) p(i, j) = x[i + j * n];
  return p;
}

}  // namespace

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  if (!a.is_square() || !q.is_square() || a.rows() != q.rows())
    throw DimensionError("solve_lyapunov: A and Q must be square and the same size");
  const std::size_t n = a.rows();
  const std::size_t nn = n * n;

  // Column-major vec: (I (x) A^T + A^T (x) I) vec(P) = -vec(Q).
  Matrix kron(nn, nn);
  Vector rhs(nn);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = i + j * n;
      for (std::size_t m = 0; m < n; ++m) {
        kron(row, m + j * n) += a(m, i);
        kron(row, i + m * n) += a(m, j);
      }
      rhs[row] = -q(i, j);
    }
  }

  Vector x = lu_solve(kron, rhs);
  if (x.size() != nn) throw NoSolution("solve_lyapunov: Kronecker system is singular (A not Hurwitz)");

  // One round of iterative refinement keeps the residual at rounding level.
  Matrix p = symmetrized(unvec(x, n));
  const Matrix resid = lyapunov_operator(a, p) + q;
  Vector rvec(nn);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rvec[i + j * n] = -resid(i, j);
  const Vector dx = lu_solve(kron, rvec);
  if (dx.size() == nn) p = symmetrized(p + unvec(dx, n));

  const SymEig eig = sym_eig(p);
  if (!(eig.min > 0.0)) throw NoSolution("solve_lyapunov: solution is not positive definite (A not Hurwitz)");
  return p;
}

}  // namespace hierlyap::numerics
