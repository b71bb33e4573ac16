#include <cmath>

#include "hierlyap/kernels.hpp"

namespace hierlyap::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double abs_sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    // NaN propagates so divergence checks downstream see it.
    if (a > m || std::isnan(a)) m = a;
  }
  return m;
}

void rotate_scalar(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void rk4_combine_scalar(const double* base, const double* k1, const double* k2,
                        const double* k3, const double* k4, double h, double* out,
                        std::size_t n) {
  const double w = h / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = base[i] + w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static constexpr KernelTable table{
      Isa::Scalar,  "scalar",      dot_scalar,   axpy_scalar,      scale_scalar,
      abs_sum_scalar, max_abs_scalar, rotate_scalar, rk4_combine_scalar,
  };
  return table;
}

}  // namespace hierlyap::kernels
