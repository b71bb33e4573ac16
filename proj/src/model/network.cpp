#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "hierlyap/errors.hpp"
#include "hierlyap/model.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::model {
namespace {

std::string sub_name(std::size_t k) { return "subsystem " + std::to_string(k + 1); }
std::string coupling_name(std::size_t i) { return "coupling " + std::to_string(i + 1); }

void validate_subsystem(const Subsystem& s, std::size_t k) {
  const std::size_t n = s.A.rows();
  if (n == 0 || !s.A.is_square()) throw ModelError(sub_name(k) + ": A must be a non-empty square matrix");
  if (s.B.size() != n) throw ModelError(sub_name(k) + ": B length does not match A");
  if (s.C.size() != n) throw ModelError(sub_name(k) + ": C length does not match A");
  if (s.x_star.size() != n) throw ModelError(sub_name(k) + ": x_star length does not match A");
  if (s.f.arity() != n) throw ModelError(sub_name(k) + ": f arity does not match A");
  if (!(s.d > 0.0) || !std::isfinite(s.d)) throw ModelError(sub_name(k) + ": ball radius d must be positive");
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(s.A.data()) || !finite(s.B) || !finite(s.C) || !finite(s.x_star))
    throw ModelError(sub_name(k) + ": non-finite entry");
  if (s.P) {
    if (s.P->rows() != n || !s.P->is_square()) throw ModelError(sub_name(k) + ": P has the wrong shape");
    const double scale = std::max(1.0, frobenius_norm(*s.P));
    if (asymmetry(*s.P) > numerics::kSymmetryTol * scale)
      throw ModelError(sub_name(k) + ": P is not symmetric");
    if (!(numerics::sym_eig(*s.P).min > 0.0)) throw ModelError(sub_name(k) + ": P is not positive definite");
  }
}

template <class StateForm>
void validate_state_form(const StateForm& f, const std::vector<Subsystem>& subs, std::size_t i) {
  if (f.subsystem >= subs.size())
    throw ModelError(coupling_name(i) + ": state subsystem index out of range");
  if (f.component >= subs[f.subsystem].dim())
    throw ModelError(coupling_name(i) + ": state component index out of range");
  if (!std::isfinite(f.amplitude) || !std::isfinite(f.phase))
    throw ModelError(coupling_name(i) + ": non-finite amplitude or phase");
}

double form_magnitude(const CouplingForm& form) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return std::fabs(f.value);
        } else {
          return std::fabs(f.amplitude);
        }
      },
      form);
}

}  // namespace

Network build_network(std::vector<Subsystem> subsystems, std::vector<Coupling> couplings) {
  for (std::size_t k = 0; k < subsystems.size(); ++k) validate_subsystem(subsystems[k], k);

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const Coupling& c = couplings[i];
    if (c.from >= subsystems.size() || c.to >= subsystems.size())
      throw ModelError(coupling_name(i) + ": subsystem index out of range");
    if (c.from == c.to && !c.self_loop)
      throw ModelError(coupling_name(i) + ": self coupling must be declared explicitly");
    if (!seen.emplace(c.to, c.from).second)
      throw ModelError(coupling_name(i) + ": duplicate coupling into " + sub_name(c.to) + " from " +
                       sub_name(c.from));
    if (!(c.bound >= 0.0) || !std::isfinite(c.bound))
      throw ModelError(coupling_name(i) + ": bound must be a nonnegative finite number");
    if (const auto* s = std::get_if<SinOfState>(&c.form)) validate_state_form(*s, subsystems, i);
    if (const auto* s = std::get_if<CosOfState>(&c.form)) validate_state_form(*s, subsystems, i);
    if (const auto* s = std::get_if<Constant>(&c.form); s && !std::isfinite(s->value))
      throw ModelError(coupling_name(i) + ": non-finite constant");
    if (form_magnitude(c.form) > c.bound)
      throw ModelError(coupling_name(i) + ": coupling magnitude exceeds its declared bound");
  }

  Network net;
  net.subsystems_ = std::move(subsystems);
  net.couplings_ = std::move(couplings);
  net.neighbors_.assign(net.subsystems_.size(), {});
  for (const Coupling& c : net.couplings_) net.neighbors_[c.to].push_back(c.from);
  for (auto& nk : net.neighbors_) std::sort(nk.begin(), nk.end());
  net.offsets_.resize(net.subsystems_.size());
  std::size_t off = 0;
  for (std::size_t k = 0; k < net.subsystems_.size(); ++k) {
    net.offsets_[k] = off;
    off += net.subsystems_[k].dim();
  }
  net.state_dim_ = off;
  return net;
}

std::optional<std::size_t> Network::coupling_index(std::size_t to, std::size_t from) const {
  for (std::size_t i = 0; i < couplings_.size(); ++i)
    if (couplings_[i].to == to && couplings_[i].from == from) return i;
  return std::nullopt;
}

Vector Network::equilibrium() const {
  Vector x;
  x.reserve(state_dim_);
  for (const Subsystem& s : subsystems_) x.insert(x.end(), s.x_star.begin(), s.x_star.end());
  return x;
}

Network Network::without_couplings(std::span<const std::size_t> removed) const {
  std::vector<Coupling> kept;
  for (std::size_t i = 0; i < couplings_.size(); ++i)
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) kept.push_back(couplings_[i]);
  return build_network(subsystems_, std::move(kept));
}

double eval_coupling(const Network& net, const Coupling& c, std::span<const double> x, double /*t*/) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return f.value;
        } else {
          const double xs = x[net.offset(f.subsystem) + f.component];
          if constexpr (std::is_same_v<T, SinOfState>) {
            return f.amplitude * std::sin(xs + f.phase);
          } else {
            return f.amplitude * std::cos(xs + f.phase);
          }
        }
      },
      c.form);
}

void eval_dynamics_into(const Network& net, std::span<const double> x, double t, std::span<double> out) {
  if (x.size() != net.state_dim() || out.size() != net.state_dim())
    throw DimensionError("eval_dynamics: state has the wrong dimension");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < net.size(); ++k) {
    const Subsystem& s = net.subsystem(k);
    const auto xk = net.block(x, k);
    auto dk = out.subspan(net.offset(k), s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < s.dim(); ++j) acc += s.A(i, j) * xk[j];
      dk[i] = acc;
    }
    s.f.accumulate(xk, dk);
  }
  for (const Coupling& c : net.couplings()) {
    const Subsystem& src = net.subsystem(c.from);
    const Subsystem& dst = net.subsystem(c.to);
    const auto xj = net.block(x, c.from);
    double y = 0.0;
    for (std::size_t i = 0; i < src.dim(); ++i) y += src.C[i] * xj[i];
    const double u = eval_coupling(net, c, x, t) * y;
    auto dk = out.subspan(net.offset(c.to), dst.dim());
    for (std::size_t i = 0; i < dst.dim(); ++i) dk[i] += dst.B[i] * u;
  }
}

Vector eval_dynamics(const Network& net, std::span<const double> x, double t) {
  Vector out(net.state_dim());
  eval_dynamics_into(net, x, t, out);
  return out;
}

EquilibriumResidual equilibrium_residual(const Network& net, std::span<const double> x_star) {
  EquilibriumResidual r;
  r.nominal_only = std::any_of(net.couplings().begin(), net.couplings().end(),
                               [](const Coupling& c) { return !c.is_constant(); });
  const Vector dx = eval_dynamics(net, x_star, 0.0);
  r.residuals.resize(net.size());
  for (std::size_t k = 0; k < net.size(); ++k) r.residuals[k] = norm2(net.block(dx, k));
  return r;
}

}  // namespace hierlyap::model
