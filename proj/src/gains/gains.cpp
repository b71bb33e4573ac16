#include "hierlyap/gains.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hierlyap/errors.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::gains {

Matrix compute_P(const model::Subsystem& sub, std::size_t index) {
  if (sub.P) return *sub.P;
  try {
    return numerics::solve_lyapunov(sub.A, Matrix::identity(sub.dim()));
  } catch (const NoSolution& e) {
    throw AssumptionViolation(index, std::string("A is not Hurwitz (") + e.what() + ")");
  }
}

double compute_lambda(const Matrix& A, const Matrix& P, std::size_t index) {
  const Matrix ap = A.transpose() * P;
  const double lambda = -numerics::sym_eig(ap + ap.transpose()).max;
  if (!(lambda > 0.0))
    throw AssumptionViolation(index, "A^T P + P A is not negative definite (lambda = " +
                                         std::to_string(lambda) + ")");
  return lambda;
}

namespace {

// |z^T P (f(x* + z) - f(x*))| / |z|^2
class MuRatio {
 public:
  MuRatio(const model::Polynomial& f, const Matrix& P, std::span<const double> x_star)
      : f_(f), P_(P), x_star_(x_star.begin(), x_star.end()), f_star_(f.evaluate(x_star)),
        x_(x_star.size()), fx_(x_star.size()) {}

  double operator()(std::span<const double> z) {
    const std::size_t n = z.size();
    for (std::size_t i = 0; i < n; ++i) x_[i] = x_star_[i] + z[i];
    std::fill(fx_.begin(), fx_.end(), 0.0);
    f_.accumulate(x_, fx_);
    for (std::size_t i = 0; i < n; ++i) fx_[i] -= f_star_[i];
    double form = 0.0;
    double zz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double pf = 0.0;
      for (std::size_t j = 0; j < n; ++j) pf += P_(i, j) * fx_[j];
      form += z[i] * pf;
      zz += z[i] * z[i];
    }
    return std::fabs(form) / zz;
  }

 private:
  const model::Polynomial& f_;
  const Matrix& P_;
  Vector x_star_;
  Vector f_star_;
  Vector x_;
  Vector fx_;
};

}  // namespace

MuEstimate estimate_mu(const model::Polynomial& f, const Matrix& P, std::span<const double> x_star,
                       double d, const MuOptions& options) {
  if (!(d > 0.0)) throw ModelError("estimate_mu: ball radius must be positive");
  if (f.empty()) return {0.0, MuMethod::Analytic};
  const std::size_t n = f.arity();
  if (P.rows() != n || x_star.size() != n) throw DimensionError("estimate_mu: dimension mismatch");

  if (auto mono = f.as_scalar_monomial(); mono && x_star[0] == 0.0) {
    return {std::fabs(mono->coeff) * P(0, 0) * std::pow(d, static_cast<double>(mono->degree) - 1.0),
            MuMethod::Analytic};
  }

  MuRatio ratio(f, P, x_star);
  const double floor_norm = 1e-6 * d;
  double best = 0.0;
  Vector z(n);

  // Grid over [-d, d]^n: interior points inside the ball and their radial
  // projections onto the sphere.
  std::size_t per_axis = 3;
  while (std::pow(static_cast<double>(per_axis + 2), static_cast<double>(n)) <=
         static_cast<double>(options.grid_budget))
    per_axis += 2;
  std::vector<std::size_t> idx(n, 0);
  Vector zs(n);
  for (bool done = false; !done;) {
    for (std::size_t i = 0; i < n; ++i)
      z[i] = -d + 2.0 * d * static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
    const double r = norm2(z);
    if (r >= floor_norm) {
      if (r <= d) best = std::max(best, ratio(z));
      for (std::size_t i = 0; i < n; ++i) zs[i] = z[i] * (d / r);
      best = std::max(best, ratio(zs));
    }
    std::size_t axis = 0;
    while (axis < n && ++idx[axis] == per_axis) idx[axis++] = 0;
    done = axis == n;
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < options.random_samples; ++s) {
    for (double& zi : z) zi = normal(rng);
    const double len = norm2(z);
    if (len == 0.0) continue;
    const double radius = d * std::pow(unit(rng), 1.0 / static_cast<double>(n));
    if (radius < floor_norm) continue;
    for (double& zi : z) zi *= radius / len;
    best = std::max(best, ratio(z));
  }
  return {options.safety_factor * best, MuMethod::Sampled};
}

double nominal_coupling_gain(const Matrix& P, std::span<const double> B, double L,
                             std::span<const double> C) {
  const Matrix pblc = (P * Matrix::column(B)) * (L * Matrix::row_vector(C));
  return 2.0 * numerics::spectral_norm(pblc);
}

double robust_coupling_gain(const Matrix& P, std::span<const double> B, double bound,
                            std::span<const double> C) {
  const Matrix pb = P * Matrix::column(B);
  return 2.0 * bound * numerics::spectral_norm(pb) * norm2(C);
}

double coupling_gain(const Matrix& P_to, std::span<const double> B_to, const model::Coupling& c,
                     std::span<const double> C_from, GainKind kind) {
  if (kind == GainKind::Robust) return robust_coupling_gain(P_to, B_to, c.bound, C_from);
  const auto* k = std::get_if<model::Constant>(&c.form);
  if (!k) throw GainError("nominal gain of a state-dependent coupling is undefined; use the robust form");
  return nominal_coupling_gain(P_to, B_to, k->value, C_from);
}

GainSet build_gain_set(const model::Network& net, const GainOptions& options) {
  const std::size_t n = net.size();
  GainSet g;
  g.per_subsystem.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const model::Subsystem& s = net.subsystem(k);
    SubsystemGains& out = g.per_subsystem[k];
    out.P = compute_P(s, k);
    out.lambda = compute_lambda(s.A, out.P, k);
    MuOptions mu_opts = options.mu;
    // Distinct deterministic stream per subsystem.
    mu_opts.seed = options.mu.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(k);
    const MuEstimate mu = estimate_mu(s.f, out.P, s.x_star, s.d, mu_opts);
    out.mu = mu.mu;
    out.mu_method = mu.method;
    out.d = s.d;
  }

  g.alpha = Matrix(n, n);
  g.alpha_bar = Matrix(n, n);
  for (const model::Coupling& c : net.couplings()) {
    const model::Subsystem& to = net.subsystem(c.to);
    const model::Subsystem& from = net.subsystem(c.from);
    const Matrix& P = g.per_subsystem[c.to].P;
    const double robust = coupling_gain(P, to.B, c, from.C, GainKind::Robust);
    g.alpha_bar(c.to, c.from) = robust;
    if (c.is_constant()) {
      g.alpha(c.to, c.from) = coupling_gain(P, to.B, c, from.C, GainKind::Nominal);
    } else {
      g.alpha(c.to, c.from) = robust;
      g.conservative.emplace_back(c.to, c.from);
    }
  }
  return g;
}

}  // namespace hierlyap::gains
