#include <algorithm>
#include <cmath>
#include <limits>

#include "hierlyap/certify.hpp"
#include "hierlyap/errors.hpp"
#include "hierlyap/kernels.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::certify {

std::vector<numerics::LinearRow> dominance_rows(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("dominance_rows: matrix is not square");
  const std::size_t n = m.rows();
  // Row k of S = M^T C + C M: S_kk = 2 c_k m_kk, |S_kj| <= c_k |m_kj| + c_j |m_jk|.
  std::vector<numerics::LinearRow> rows(n);
  for (std::size_t k = 0; k < n; ++k) {
    Vector& a = rows[k].coeffs;
    a.assign(n, 0.0);
    a[k] = 2.0 * m(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      a[k] += std::fabs(m(k, j));
      a[j] += std::fabs(m(j, k));
    }
    rows[k].rhs = -kRowMargin;
  }
  return rows;
}

double scaled_max_eig(const Matrix& m, std::span<const double> c) {
  const std::size_t n = m.rows();
  if (c.size() != n) throw DimensionError("scaled_max_eig: scaling has the wrong length");
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = m(j, i) * c[j] + c[i] * m(i, j);
  return numerics::sym_eig(s).max;
}

std::optional<Scaling> find_scaling(const Matrix& m, std::span<const double> weights) {
  const std::size_t n = m.rows();
  if (!weights.empty() && weights.size() != n) throw DimensionError("find_scaling: weight vector has the wrong length");
  numerics::LpProblem lp;
  lp.num_vars = n;
  lp.rows = dominance_rows(m);
  lp.objective = weights.empty() ? Vector(n, 1.0) : Vector(weights.begin(), weights.end());
  const numerics::FeasibilityResult res = numerics::lp_feasible(lp);
  if (!res.feasible()) return std::nullopt;
  Scaling s{res.solution, n == 0 ? -std::numeric_limits<double>::infinity() : scaled_max_eig(m, res.solution)};
  if (!(s.verify_eig < 0.0)) return std::nullopt;
  return s;
}

namespace {

Certificate make_certificate(const Scaling& s, const gains::GainSet& g, const Vector& w, Kind kind) {
  Certificate cert;
  cert.c = s.c;
  cert.verify_eig = s.verify_eig;
  cert.v_min = v_min(s.c, g);
  cert.v_x0 = kernels::dot(s.c, w);
  cert.kind = kind;
  return cert;
}

// Scales c up so min_k c_k = 1; membership and negativity are unchanged.
void normalize(Certificate& cert, const Matrix& m, const gains::GainSet& g, const Vector& w) {
  if (cert.c.empty()) return;
  const double lo = *std::min_element(cert.c.begin(), cert.c.end());
  if (!(lo < 1.0)) return;
  for (double& ck : cert.c) ck /= lo;
  cert.verify_eig = scaled_max_eig(m, cert.c);
  cert.v_min = v_min(cert.c, g);
  cert.v_x0 = kernels::dot(cert.c, w);
}

}  // namespace

Verdict adapt(const StructureMatrix& m, const gains::GainSet& g, std::span<const double> x0,
              std::span<const double> x_star, const AdaptOptions& options) {
  Verdict verdict;
  if (!in_ball_set(x0, g, x_star)) {
    verdict.reason = Reason::NotInBallSet;
    return verdict;
  }

  const std::size_t n = g.size();
  const Vector w = lyapunov_contributions(x0, g, x_star);
  const bool at_equilibrium = std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
  const Vector step1_weights = at_equilibrium ? Vector(n, 1.0) : w;

  const std::optional<Scaling> first = find_scaling(m.entries, step1_weights);
  if (!first) {
    verdict.reason = Reason::NoScalingFound;
    return verdict;
  }
  Certificate cert = make_certificate(*first, g, w, m.kind);
  cert.trace.push_back({1, 0.0, 0.0, true, cert.v_x0, cert.v_min});
  if (cert.v_x0 < cert.v_min) {
    verdict.certified = true;
    verdict.reason = Reason::AdaptationSucceeded;
    verdict.certificate = std::move(cert);
    return verdict;
  }

  const double v_min_first = cert.v_min;
  double eps = options.epsilon0.value_or(0.1 * v_min_first);
  const double min_eps = options.min_epsilon.value_or(1e-6 * v_min_first);
  const Vector beta = boundary_levels(g);
  const std::vector<numerics::LinearRow> rows = dominance_rows(m.entries);
  double prev_v_min = v_min_first;
  std::vector<StepRecord> trace = cert.trace;

  for (std::size_t step = 2; step <= options.max_outer && eps >= min_eps; ++step) {
    numerics::LpProblem lp;
    lp.num_vars = n;
    lp.rows = rows;
    lp.rows.push_back({w, prev_v_min - eps});
    lp.lower.resize(n);
    for (std::size_t k = 0; k < n; ++k) lp.lower[k] = prev_v_min / beta[k];
    lp.objective = w;

    StepRecord rec{step, eps, prev_v_min - eps, false, 0.0, 0.0};
    const numerics::FeasibilityResult res = numerics::lp_feasible(lp);
    std::optional<Scaling> accepted;
    if (res.feasible()) {
      Scaling s{res.solution, scaled_max_eig(m.entries, res.solution)};
      if (s.verify_eig < 0.0) accepted = std::move(s);
    }
    if (!accepted) {
      trace.push_back(rec);
      eps *= 0.5;
      continue;
    }

    Certificate next = make_certificate(*accepted, g, w, m.kind);
    rec.accepted = true;
    rec.v_x0 = next.v_x0;
    rec.v_min = next.v_min;
    trace.push_back(rec);
    if (next.v_x0 < next.v_min) {
      normalize(next, m.entries, g, w);
      next.trace = std::move(trace);
      verdict.certified = true;
      verdict.reason = Reason::AdaptationSucceeded;
      verdict.certificate = std::move(next);
      return verdict;
    }
    prev_v_min = next.v_min;
    cert = std::move(next);
  }

  normalize(cert, m.entries, g, w);
  cert.trace = std::move(trace);
  verdict.reason = Reason::AdaptationExhausted;
  verdict.certificate = std::move(cert);
  return verdict;
}

}  // namespace hierlyap::certify
