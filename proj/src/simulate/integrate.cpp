#include <cmath>
#include <stdexcept>

#include "hierlyap/errors.hpp"
#include "hierlyap/kernels.hpp"
#include "hierlyap/simulate.hpp"

namespace hierlyap::simulate {
namespace {

// Fixed-step schedule: n steps of dt, with the last one trimmed to land on t_end.
std::size_t step_count(const SimConfig& cfg) {
  const double ratio = cfg.t_end / cfg.dt;
  const double nearest = std::round(ratio);
  if (std::fabs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

class Rk4 {
 public:
  explicit Rk4(const model::Network& net)
      : net_(net), k1_(net.state_dim()), k2_(net.state_dim()), k3_(net.state_dim()),
        k4_(net.state_dim()), tmp_(net.state_dim()) {}

  void step(const Vector& x, double t, double h, Vector& out) {
    const auto& k = kernels::active();
    const std::size_t n = x.size();
    model::eval_dynamics_into(net_, x, t, k1_);
    tmp_ = x;
    k.axpy(0.5 * h, k1_.data(), tmp_.data(), n);
    model::eval_dynamics_into(net_, tmp_, t + 0.5 * h, k2_);
    tmp_ = x;
    k.axpy(0.5 * h, k2_.data(), tmp_.data(), n);
    model::eval_dynamics_into(net_, tmp_, t + 0.5 * h, k3_);
    tmp_ = x;
    k.axpy(h, k3_.data(), tmp_.data(), n);
    model::eval_dynamics_into(net_, tmp_, t + h, k4_);
    k.rk4_combine(x.data(), k1_.data(), k2_.data(), k3_.data(), k4_.data(), h, out.data(), n);
  }

 private:
  const model::Network& net_;
  Vector k1_, k2_, k3_, k4_, tmp_;
};

bool finite(const Vector& x) { return std::isfinite(kernels::max_abs(x)); }

}  // namespace

Trajectory integrate(const model::Network& net, std::span<const double> x0, const SimConfig& cfg,
                     std::optional<LyapunovProbe> probe) {
  if (x0.size() != net.state_dim()) throw DimensionError("integrate: initial state has the wrong dimension");
  if (!(cfg.t_end > 0.0) || !(cfg.dt > 0.0) || cfg.dt > cfg.t_end || cfg.record_every == 0)
    throw std::invalid_argument("integrate: need 0 < dt <= t_end and record_every >= 1");

  const Vector x_star = net.equilibrium();
  Trajectory traj;
  if (probe) traj.v_values.emplace();
  auto record = [&](double t, const Vector& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    if (probe)
      traj.v_values->push_back(certify::lyapunov_value(x, probe->certificate.c, probe->gains, x_star));
  };

  Vector x(x0.begin(), x0.end());
  if (!finite(x)) throw DivergenceError(0.0, "integrate: initial state is not finite");
  record(0.0, x);

  Rk4 rk4(net);
  Vector next(x.size());
  const std::size_t n = step_count(cfg);
  double t = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t_next = i == n ? cfg.t_end : static_cast<double>(i) * cfg.dt;
    rk4.step(x, t, t_next - t, next);
    if (!finite(next))
      throw DivergenceError(t, "integrate: state became non-finite after t = " + std::to_string(t));
    x.swap(next);
    t = t_next;
    if (i % cfg.record_every == 0 || i == n) record(t, x);
  }
  return traj;
}

ValidationReport validate_certificate(const Trajectory& traj, const certify::Certificate& cert,
                                      const gains::GainSet& gains, std::span<const double> x_star) {
  if (!traj.v_values) throw std::invalid_argument("validate_certificate: trajectory has no Lyapunov values");
  const auto& v = *traj.v_values;
  ValidationReport r;
  const double tol = v.empty() ? 0.0 : kMonotoneTol * v.front();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    if (i > 0 && v[i] > v[i - 1] + tol && r.v_monotone) {
      r.v_monotone = false;
      r.first_v_violation = i;
    }
    const auto& x = traj.states[i];
    if (r.in_ball_set && !certify::in_ball_set(x, gains, x_star)) {
      r.in_ball_set = false;
      r.first_ball_violation = i;
    }
    if (r.in_invariant_set && !certify::in_invariant_set(x, cert, gains, x_star)) {
      r.in_invariant_set = false;
      r.first_invariant_violation = i;
    }
  }
  return r;
}

std::optional<double> convergence_order_check(double rate, double dt, double t_end) {
  model::Subsystem s;
  s.A = Matrix{{rate}};
  s.B = {1.0};
  s.C = {1.0};
  s.f = model::Polynomial(1);
  s.x_star = {0.0};
  s.d = 1.0;
  const model::Network net = model::build_network({s}, {});
  const double exact = std::exp(rate * t_end);
  auto error_at = [&](double h) {
    const Trajectory tr = integrate(net, Vector{1.0}, {t_end, h, 1u << 30});
    return std::fabs(tr.states.back()[0] - exact);
  };
  const double coarse = error_at(dt);
  const double fine = error_at(0.5 * dt);
  if (coarse == 0.0 || fine == 0.0) return std::nullopt;
  return std::log2(coarse / fine);
}

}  // namespace hierlyap::simulate
