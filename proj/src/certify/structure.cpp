#include <algorithm>
#include <cmath>
#include <limits>

#include "hierlyap/certify.hpp"
#include "hierlyap/errors.hpp"
#include "hierlyap/kernels.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::certify {

StructureMatrix build_structure_matrix(const gains::GainSet& g, Kind kind) {
  const std::size_t n = g.size();
  const Matrix& off = kind == Kind::Robust ? g.alpha_bar : g.alpha;
  StructureMatrix m{Matrix(n, n), kind};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) m.entries(k, j) = off(k, j);
    m.entries(k, k) = -g.per_subsystem[k].lambda + 2.0 * g.per_subsystem[k].mu + off(k, k);
  }
  return m;
}

Dominance is_diagonally_dominant(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("is_diagonally_dominant: matrix is not square");
  Dominance d;
  d.row_sums.resize(m.rows());
  d.dominant = true;
  for (std::size_t k = 0; k < m.rows(); ++k) {
    double s = m(k, k);
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (j != k) s += std::fabs(m(k, j));
    d.row_sums[k] = s;
    if (!(s < 0.0)) d.dominant = false;
  }
  return d;
}

Vector boundary_levels(const gains::GainSet& g) {
  Vector beta(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto& s = g.per_subsystem[k];
    beta[k] = s.d * s.d * numerics::sym_eig(s.P).min;
  }
  return beta;
}

double v_min(std::span<const double> c, const gains::GainSet& g) {
  if (c.size() != g.size()) throw DimensionError("v_min: scaling has the wrong length");
  const Vector beta = boundary_levels(g);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < c.size(); ++k) best = std::min(best, c[k] * beta[k]);
  return g.size() == 0 ? 0.0 : best;
}

Vector lyapunov_contributions(std::span<const double> x, const gains::GainSet& g,
                              std::span<const double> x_star) {
  if (x.size() != x_star.size()) throw DimensionError("lyapunov_value: state and equilibrium differ in size");
  Vector out(g.size());
  std::size_t off = 0;
  Vector z;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Matrix& P = g.per_subsystem[k].P;
    const std::size_t nk = P.rows();
    if (off + nk > x.size()) throw DimensionError("lyapunov_value: state too short for the gain set");
    z.assign(nk, 0.0);
    for (std::size_t i = 0; i < nk; ++i) z[i] = x[off + i] - x_star[off + i];
    const Vector pz = P * z;
    out[k] = kernels::dot(z, pz);
    off += nk;
  }
  if (off != x.size()) throw DimensionError("lyapunov_value: state too long for the gain set");
  return out;
}

double lyapunov_value(std::span<const double> x, std::span<const double> c, const gains::GainSet& g,
                      std::span<const double> x_star) {
  if (c.size() != g.size()) throw DimensionError("lyapunov_value: scaling has the wrong length");
  const Vector w = lyapunov_contributions(x, g, x_star);
  return kernels::dot(c, w);
}

bool in_ball_set(std::span<const double> x, const gains::GainSet& g, std::span<const double> x_star) {
  if (x.size() != x_star.size()) throw DimensionError("in_ball_set: state and equilibrium differ in size");
  std::size_t off = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::size_t nk = g.per_subsystem[k].P.rows();
    double r2 = 0.0;
    for (std::size_t i = 0; i < nk; ++i) {
      const double z = x[off + i] - x_star[off + i];
      r2 += z * z;
    }
    if (!(std::sqrt(r2) <= g.per_subsystem[k].d)) return false;
    off += nk;
  }
  return true;
}

bool in_invariant_set(std::span<const double> x, const Certificate& cert, const gains::GainSet& g,
                      std::span<const double> x_star) {
  return in_ball_set(x, g, x_star) && lyapunov_value(x, cert.c, g, x_star) < cert.v_min;
}

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::InDominantRegion: return "InDominantRegion";
    case Reason::AdaptationSucceeded: return "AdaptationSucceeded";
    case Reason::NotInBallSet: return "NotInBallSet";
    case Reason::AdaptationExhausted: return "AdaptationExhausted";
    case Reason::NoScalingFound: return "NoScalingFound";
  }
  return "Unknown";
}

std::string_view to_string(Kind k) { return k == Kind::Robust ? "Robust" : "Nominal"; }

}  // namespace hierlyap::certify
