// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance --only N   run criterion N
//
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hierlyap/certify.hpp"
#include "hierlyap/example.hpp"
#include "hierlyap/numerics.hpp"
#include "hierlyap/simulate.hpp"
#include "support.hpp"

using namespace hierlyap;
using hierlyap::test::Rng;
using hierlyap::test::to_eigen;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_ms;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const io::NetworkConfig& ring() {
  static const io::NetworkConfig cfg = example::ring_config();
  return cfg;
}

certify::AssessOptions robust() { return {.kind = certify::Kind::Robust}; }

double max_eig_oracle(const Matrix& m, std::span<const double> c) {
  const Eigen::MatrixXd e = to_eigen(m);
  const Eigen::VectorXd cv = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  const Eigen::MatrixXd s = e.transpose() * cv.asDiagonal() + cv.asDiagonal() * e;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().maxCoeff();
}

Outcome c1_dominance() {
  const gains::GainSet g = gains::build_gain_set(ring().network);
  const certify::Dominance d = certify::is_diagonally_dominant(certify::build_structure_matrix(g, certify::Kind::Robust));
  bool all_negative = true;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < d.row_sums.size(); ++k) {
    all_negative = all_negative && d.row_sums[k] < 0.0;
    if (d.row_sums[k] > d.row_sums[worst]) worst = k;
  }
  // Rows with a_k = 0.9 give exactly the stated value.
  bool a09_rows = true;
  for (std::size_t k = 1; k <= 10; ++k) a09_rows = a09_rows && std::fabs(d.row_sums[k - 1] + 0.9) <= 1e-12;
  const bool worst_ok = std::fabs(d.row_sums[worst] + 0.9) <= 1e-12;
  return {all_negative && worst_ok,
          fmt("all rows < 0: %s; rows with a_k = 0.9 equal -0.9: %s; worst row %zu = %.15g, expected -0.9",
              all_negative ? "yes" : "no", a09_rows ? "yes" : "no", worst + 1, d.row_sums[worst])};
}

Outcome c2_certification() {
  const certify::Assessment a = certify::assess_detailed(ring().network, *ring().initial_state, robust());
  const auto s = certify::find_scaling(a.matrix.entries);
  if (!s) return {false, "find_scaling found no scaling"};
  const double eig = max_eig_oracle(a.matrix.entries, s->c);
  const auto& cert = a.verdict.certificate;
  const bool ok = eig < 0.0 && s->verify_eig < 0.0 && a.verdict.certified && cert && cert->v_x0 < cert->v_min;
  return {ok, fmt("lambda_max = %.6g (independent %.6g); %s, V(x0) = %.6g < V_min = %.6g", s->verify_eig, eig,
                  std::string(certify::to_string(a.verdict.reason)).c_str(), cert ? cert->v_x0 : NAN,
                  cert ? cert->v_min : NAN)};
}

Outcome c3_convergence() {
  const certify::Assessment a = certify::assess_detailed(ring().network, *ring().initial_state, robust());
  if (!a.verdict.certificate) return {false, "no certificate"};
  const certify::Certificate& cert = *a.verdict.certificate;
  const simulate::Trajectory tr = simulate::integrate(ring().network, *ring().initial_state, {5.0, 1e-3, 1},
                                                      simulate::LyapunovProbe{cert, a.gains});
  double final_max = 0.0;
  for (double v : tr.states.back()) final_max = std::max(final_max, std::fabs(v));
  const Vector xs = ring().network.equilibrium();
  const simulate::ValidationReport r = simulate::validate_certificate(tr, cert, a.gains, xs);
  // Independent monotonicity check against the stated per-step tolerance.
  bool monotone = true;
  const auto& v = *tr.v_values;
  for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i] <= v[i - 1] + 1e-6 * v.front();
  const bool ok = tr.times.back() == 5.0 && final_max < 1e-3 && monotone && r.all();
  return {ok, fmt("max |x_k(5)| = %.3g; V monotone %s; inside ball set %s; inside invariant set %s (%zu points)",
                  final_max, monotone ? "yes" : "no", r.in_ball_set ? "yes" : "no",
                  r.in_invariant_set ? "yes" : "no", tr.states.size())};
}

Outcome c4_dominance_scalings() {
  Rng rng(4004);
  double worst = -INFINITY;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = rng.index(2, 30);
    Matrix m = rng.matrix(n, n, 0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      double off = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) off += m(k, j);
      m(k, k) = -off - rng.uniform(1e-3, 1.0);
    }
    const auto s = certify::find_scaling(m);
    if (!s) return {false, fmt("trial %d (n = %zu): no scaling", trial, n)};
    if (!(s->verify_eig < 0.0)) return {false, fmt("trial %d: verify_eig = %g", trial, s->verify_eig)};
    worst = std::max(worst, s->verify_eig);
  }
  return {true, fmt("500/500 feasible, largest verify_eig = %.3g", worst)};
}

Outcome c5_measure_bound() {
  Rng rng(5005);
  double tightest = INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng.index(1, 20);
    const Matrix a = rng.matrix(n, n, -5.0, 5.0);
    const double abscissa = to_eigen(a).eigenvalues().real().maxCoeff();
    const double measure = numerics::matrix_measure_inf(a);
    if (abscissa > measure + 1e-8) return {false, fmt("trial %d: %.12g > %.12g", trial, abscissa, measure)};
    tightest = std::min(tightest, measure - abscissa);
  }
  return {true, fmt("1000/1000 hold, smallest gap %.3g", tightest)};
}

Outcome c6_vmin_oracle() {
  Rng rng(6006);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    gains::GainSet g;
    const std::size_t n = rng.index(1, 4);
    Vector c(n);
    std::size_t dim = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t nk = rng.index(1, 3);
      g.per_subsystem.push_back({rng.spd(nk), 1.0, 0.0, rng.uniform(0.5, 4.0), gains::MuMethod::Analytic});
      c[k] = rng.uniform(1.0, 10.0);
      dim += nk;
    }
    const Vector xs = rng.vector(dim);
    // The minimum over the boundary of the ball product has one block on its
    // sphere and every other block at its centre.
    double oracle = INFINITY;
    for (int s = 0; s < 60000; ++s) {
      const std::size_t on = rng.index(0, n - 1);
      Vector x = xs;
      std::size_t off = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t nk = g.per_subsystem[k].P.rows();
        const double inner = k == on ? 1.0 : 0.0;
        Vector z(nk);
        for (double& v : z) v = rng.normal();
        const double scale = inner * g.per_subsystem[k].d / norm2(z);
        for (std::size_t i = 0; i < nk; ++i) x[off + i] += z[i] * scale;
        off += nk;
      }
      oracle = std::min(oracle, certify::lyapunov_value(x, c, g, xs));
    }
    const double closed = certify::v_min(c, g);
    const double rel = std::fabs(closed - oracle) / closed;
    if (rel > 0.01 || closed > oracle * (1.0 + 1e-12))
      return {false, fmt("trial %d: closed %.9g vs sampled %.9g", trial, closed, oracle)};
    worst = std::max(worst, rel);
  }
  return {true, fmt("100/100 within 1%%, largest relative gap %.3g", worst)};
}

// |z^T P (f(x* + z) - f(x*))| / |z|^2
double mu_ratio(const model::Polynomial& f, const Matrix& p, const Vector& xs, const Vector& z) {
  Vector x = xs;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += z[i];
  const Vector fx = f.evaluate(x), fs = f.evaluate(xs);
  Vector df(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) df[i] = fx[i] - fs[i];
  const Vector pdf = p * df;
  double form = 0.0, zz = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    form += z[i] * pdf[i];
    zz += z[i] * z[i];
  }
  return std::fabs(form) / zz;
}

Outcome c7_mu_soundness() {
  struct Instance {
    model::Polynomial f;
    Matrix p;
    Vector xs;
    double d;
  };
  std::vector<Instance> cases;
  for (const model::Subsystem& s : ring().network.subsystems()) cases.push_back({s.f, *s.P, s.x_star, s.d});
  Rng rng(7007);
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = rng.index(1, 3);
    std::vector<model::Monomial> terms;
    const std::size_t count = rng.index(1, 4);
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<unsigned> e(n, 0);
      const unsigned degree = static_cast<unsigned>(rng.index(2, 3));
      for (unsigned u = 0; u < degree; ++u) ++e[rng.index(0, n - 1)];
      terms.push_back({rng.uniform(-1, 1), e, rng.index(0, n - 1)});
    }
    cases.push_back({model::Polynomial(n, terms), rng.spd(n), rng.vector(n, -0.5, 0.5), rng.uniform(0.5, 2.0)});
  }

  bool analytic_ok = true;
  const gains::GainSet g = gains::build_gain_set(ring().network);
  for (std::size_t k = 0; k < g.size(); ++k)
    analytic_ok = analytic_ok && g.per_subsystem[k].mu_method == gains::MuMethod::Analytic &&
                  g.per_subsystem[k].mu == 3.0 * std::fabs(example::ring_a(k + 1)) &&
                  -g.per_subsystem[k].lambda + 2.0 * g.per_subsystem[k].mu == -10.0 + 6.0 * std::fabs(example::ring_a(k + 1));

  std::size_t sampled = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Instance& c = cases[i];
    const gains::MuEstimate mu = gains::estimate_mu(c.f, c.p, c.xs, c.d);
    sampled += mu.method == gains::MuMethod::Sampled ? 1 : 0;
    const std::size_t n = c.xs.size();
    Rng fresh(900000 + i);
    Vector z(n);
    for (int s = 0; s < 100000; ++s) {
      for (double& v : z) v = fresh.normal();
      const double scale = c.d * std::pow(fresh.uniform(0.0, 1.0), 1.0 / static_cast<double>(n)) / norm2(z);
      for (double& v : z) v *= scale;
      // Rounding slack only; the bound itself is not relaxed.
      if (mu_ratio(c.f, c.p, c.xs, z) > mu.mu * (1.0 + 1e-12))
        return {false, fmt("instance %zu: sample %d exceeds mu = %.9g", i, s, mu.mu)};
    }
  }
  return {analytic_ok, fmt("%zu estimates (%zu sampled) x 1e5 fresh samples: no violation; analytic ring mu = 3|a_k|: %s",
                           cases.size(), sampled, analytic_ok ? "exact" : "MISMATCH")};
}

Outcome c8_lyapunov_residual() {
  Rng rng(8008);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.index(1, 8);
    const Matrix a = rng.hurwitz(n, 0.05);
    const Matrix q = trial % 2 == 0 ? Matrix::identity(n) : rng.spd(n);
    const Matrix p = numerics::solve_lyapunov(a, q);
    const double rel = frobenius_norm(a.transpose() * p + p * a + q) / frobenius_norm(q);
    if (rel > 1e-9) return {false, fmt("trial %d (n = %zu): relative residual %.3g", trial, n, rel)};
    worst = std::max(worst, rel);
  }
  return {true, fmt("100/100, largest relative residual %.3g", worst)};
}

Outcome c9_order() {
  const auto order = simulate::convergence_order_check();
  if (!order) return {false, "zero error"};
  return {*order >= 3.8 && *order <= 4.2, fmt("observed order %.4f", *order)};
}

Outcome c10_adaptation() {
  const model::Network net = model::build_network(
      {test::scalar_subsystem(-4, 1, {}, 0.5), test::scalar_subsystem(-4, 6, {}, 0.5)},
      {test::constant_coupling(1, 0, 0.5), test::constant_coupling(0, 1, 0.5)});
  const Vector x0{0.1, 2.0};
  const gains::GainSet g = gains::build_gain_set(net);
  const certify::StructureMatrix m = certify::build_structure_matrix(g, certify::Kind::Nominal);
  const certify::AdaptOptions opts;
  const certify::Verdict v = certify::adapt(m, g, x0, net.equilibrium(), opts);
  if (!v.certificate) return {false, "no certificate"};
  const auto& trace = v.certificate->trace;
  const bool step1_fails = trace.front().v_x0 >= trace.front().v_min;
  bool chain = true;
  double prev = trace.front().v_min;
  std::size_t accepted = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (!trace[i].accepted) continue;
    ++accepted;
    chain = chain && trace[i].v_x0 <= prev - trace[i].epsilon + 1e-9;
    prev = trace[i].v_min;
  }
  const bool admits = certify::in_invariant_set(x0, *v.certificate, g, net.equilibrium());
  const bool ok = v.certified && step1_fails && accepted >= 1 && trace.size() <= opts.max_outer && chain && admits;
  return {ok, fmt("%zu steps (%zu accepted after the first), ceiling chain %s, x0 admitted %s, V(x0) = %.6g < V_min = %.6g",
                  trace.size(), accepted, chain ? "holds" : "BROKEN", admits ? "yes" : "no", v.certificate->v_x0,
                  v.certificate->v_min)};
}

Outcome c11_resilience() {
  const certify::ResilienceResult r = certify::resilience_sweep(
      ring().network, certify::single_link_subsets(ring().network), ring().initial_state, robust());
  std::size_t certified = 0;
  for (const certify::Verdict& v : r.per_subset) certified += v.certified ? 1 : 0;
  return {r.baseline.certified && r.monotone && r.per_subset.size() == 40 && certified == 40,
          fmt("baseline certified %s; %zu/%zu single-link removals certified; monotone %s",
              r.baseline.certified ? "yes" : "no", certified, r.per_subset.size(), r.monotone ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "example dominance reproduction", 1000, c1_dominance},
      {2, "example certification", 1000, c2_certification},
      {3, "example convergence", 5000, c3_convergence},
      {4, "diagonal dominance implies a scaling", 30000, c4_dominance_scalings},
      {5, "matrix measure bounds the spectral abscissa", 10000, c5_measure_bound},
      {6, "V_min closed form vs sphere sampling", 10000, c6_vmin_oracle},
      {7, "mu bound soundness", 30000, c7_mu_soundness},
      {8, "Lyapunov solver residual", 5000, c8_lyapunov_residual},
      {9, "integrator order", 1000, c9_order},
      {10, "adaptation termination and monotonicity", 1000, c10_adaptation},
      {11, "resilience monotonicity", 10000, c11_resilience},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms > c.budget_ms) {
      o.pass = false;
      o.detail += fmt(" [over budget %.0f ms]", c.budget_ms);
    }
    std::printf("%s criterion %2d (%s): %s (%.0f ms)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), ms);
    failures += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
