#pragma once

// Dense vector kernels behind every inner loop in the library.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The active table is chosen once at first use from the
// CPU feature bits; HIERLYAP_KERNELS=scalar|avx2|auto overrides the choice.

#include <cstddef>
#include <span>
#include <string_view>

namespace hierlyap::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // sum_i |x[i]|
  double (*abs_sum)(const double* x, std::size_t n);
  // max_i |x[i]|, 0 for n == 0
  double (*max_abs)(const double* x, std::size_t n);
  // Givens update of two rows: (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double* x, double* y, std::size_t n, double c, double s);
  // out[i] = base[i] + h * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i]) / 6
  void (*rk4_combine)(const double* base, const double* k1, const double* k2,
                      const double* k3, const double* k4, double h, double* out,
                      std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

// Dispatch table in use by the library.
const KernelTable& active() noexcept;

// Thin span wrappers over active().
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> x) {
  active().scale(alpha, x.data(), x.size());
}
inline double abs_sum(std::span<const double> x) {
  return active().abs_sum(x.data(), x.size());
}
inline double max_abs(std::span<const double> x) {
  return active().max_abs(x.data(), x.size());
}

namespace detail {
#if defined(HIERLYAP_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace hierlyap::kernels
