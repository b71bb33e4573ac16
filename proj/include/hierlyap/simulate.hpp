#pragma once

// Fixed-step RK4 integration of the network dynamics and empirical checks of
// a certificate along the resulting trajectory.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hierlyap/certify.hpp"
#include "hierlyap/gains.hpp"
#include "hierlyap/model.hpp"

namespace hierlyap::simulate {

struct SimConfig {
  double t_end = 5.0;
  double dt = 1e-3;
  std::size_t record_every = 1;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::optional<std::vector<double>> v_values;
};

// Lyapunov function attached to a run.
struct LyapunovProbe {
  const certify::Certificate& certificate;
  const gains::GainSet& gains;
};

/// Records step 0, every record_every-th step, and the final state. Throws
/// DivergenceError (with the last finite time) on a non-finite state, and
/// std::invalid_argument for a bad configuration.
Trajectory integrate(const model::Network& net, std::span<const double> x0, const SimConfig& cfg,
                     std::optional<LyapunovProbe> probe = std::nullopt);

struct ValidationReport {
  bool v_monotone = true;
  bool in_ball_set = true;
  bool in_invariant_set = true;
  std::optional<std::size_t> first_v_violation;
  std::optional<std::size_t> first_ball_violation;
  std::optional<std::size_t> first_invariant_violation;

  bool all() const noexcept { return v_monotone && in_ball_set && in_invariant_set; }
};

// V may rise by at most this fraction of V(0) between recorded points.
inline constexpr double kMonotoneTol = 1e-6;

/// Requires traj.v_values.
ValidationReport validate_certificate(const Trajectory& traj, const certify::Certificate& cert,
                                      const gains::GainSet& gains, std::span<const double> x_star);

/// Observed order log2(err(dt) / err(dt/2)) for x' = rate x, x(0) = 1,
/// against exp(rate t_end). Empty when the error vanishes (rate == 0).
std::optional<double> convergence_order_check(double rate = -10.0, double dt = 0.01,
                                              double t_end = 1.0);

}  // namespace hierlyap::simulate
