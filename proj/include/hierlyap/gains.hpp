#pragma once

// Per-subsystem stability constants and interconnection gains.
//
//   lambda_max(A^T P + P A) <= -lambda
//   |(x - x*)^T P (f(x) - f(x*))| <= mu |x - x*|^2   on |x - x*| <= d
//   alpha_kj     = 2 |P_k B_k L_kj C_j|
//   alpha_bar_kj = 2 lbar_kj |P_k B_k| |C_j|

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hierlyap/matrix.hpp"
#include "hierlyap/model.hpp"

namespace hierlyap::gains {

enum class MuMethod { Analytic, Sampled };

struct SubsystemGains {
  Matrix P;
  double lambda = 0.0;
  double mu = 0.0;
  double d = 0.0;
  MuMethod mu_method = MuMethod::Analytic;
};

struct GainSet {
  std::vector<SubsystemGains> per_subsystem;
  Matrix alpha;      // nominal, row k = receiving subsystem
  Matrix alpha_bar;  // robust
  // (k, j) entries of alpha that copy alpha_bar because L_kj depends on the state.
  std::vector<std::pair<std::size_t, std::size_t>> conservative;

  std::size_t size() const noexcept { return per_subsystem.size(); }
};

struct MuOptions {
  std::uint64_t seed = 42;
  std::size_t random_samples = 100000;
  // Upper bound on Cartesian grid points before clipping to the ball.
  std::size_t grid_budget = 20000;
  double safety_factor = 1.1;
};

struct MuEstimate {
  double mu = 0.0;
  MuMethod method = MuMethod::Analytic;
};

/// Supplied P when present, otherwise the Lyapunov solution with Q = I.
/// Throws AssumptionViolation (tagged with `index`) when A is not Hurwitz.
Matrix compute_P(const model::Subsystem& sub, std::size_t index = 0);

/// -lambda_max(A^T P + P A); throws AssumptionViolation if not positive.
double compute_lambda(const Matrix& A, const Matrix& P, std::size_t index = 0);

// Exact for a scalar monomial a x^m about x* = 0: mu = |a| P d^(m-1).
// Otherwise a safety-inflated maximum over a deterministic grid on and
// inside the ball plus seeded uniform samples of the ball.
MuEstimate estimate_mu(const model::Polynomial& f, const Matrix& P, std::span<const double> x_star,
                       double d, const MuOptions& options = {});

// 2 |P B L C| for a known gain L.
double nominal_coupling_gain(const Matrix& P, std::span<const double> B, double L,
                             std::span<const double> C);
// 2 lbar |P B| |C|
double robust_coupling_gain(const Matrix& P, std::span<const double> B, double bound,
                            std::span<const double> C);

enum class GainKind { Nominal, Robust };

// Throws GainError for a nominal gain on a state-dependent coupling.
double coupling_gain(const Matrix& P_to, std::span<const double> B_to, const model::Coupling& c,
                     std::span<const double> C_from, GainKind kind);

struct GainOptions {
  MuOptions mu;
};

GainSet build_gain_set(const model::Network& net, const GainOptions& options = {});

}  // namespace hierlyap::gains
