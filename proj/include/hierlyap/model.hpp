#pragma once

// Subsystems, couplings and the assembled network
//
//   x_k' = A_k x_k + f_k(x_k) + B_k sum_{j in N_k} L_kj C_j x_j
//
// with scalar input/output per subsystem. Indices are 0-based in memory.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hierlyap/matrix.hpp"

namespace hierlyap::model {

struct Monomial {
  double coeff = 0.0;
  std::vector<unsigned> exponents;  // one per state variable
  std::size_t output = 0;           // state component the term feeds
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Sparse polynomial map R^n -> R^n holding only terms of total degree >= 2.
class Polynomial {
 public:
  Polynomial() = default;
  /// Throws ModelError on a wrong exponent length, a term of degree < 2,
  /// an output index out of range, or a non-finite coefficient.
  explicit Polynomial(std::size_t arity, std::vector<Monomial> terms = {});

  std::size_t arity() const noexcept { return arity_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  Vector evaluate(std::span<const double> x) const;
  // out += f(x)
  void accumulate(std::span<const double> x, std::span<double> out) const;

  struct ScalarMonomial {
    double coeff;
    unsigned degree;
  };
  // Set when the map is a single term a*x^m in one variable.
  std::optional<ScalarMonomial> as_scalar_monomial() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::size_t arity_ = 0;
  std::vector<Monomial> terms_;
};

struct Subsystem {
  Matrix A;
  Vector B;
  Vector C;
  Polynomial f;
  Vector x_star;
  double d = 0.0;
  std::optional<Matrix> P;

  std::size_t dim() const noexcept { return A.rows(); }
  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

struct Constant {
  double value = 0.0;
  friend bool operator==(const Constant&, const Constant&) = default;
};

// amplitude * sin(x_{subsystem}[component] + phase)
struct SinOfState {
  double amplitude = 0.0;
  std::size_t subsystem = 0;
  std::size_t component = 0;
  double phase = 0.0;
  friend bool operator==(const SinOfState&, const SinOfState&) = default;
};

// amplitude * cos(x_{subsystem}[component] + phase)
struct CosOfState {
  double amplitude = 0.0;
  std::size_t subsystem = 0;
  std::size_t component = 0;
  double phase = 0.0;
  friend bool operator==(const CosOfState&, const CosOfState&) = default;
};

using CouplingForm = std::variant<Constant, SinOfState, CosOfState>;

/// Gain L_kj from output y_j (subsystem `from`) into input u_k (subsystem `to`).
struct Coupling {
  std::size_t from = 0;
  std::size_t to = 0;
  CouplingForm form;
  double bound = 0.0;      // |L_kj| <= bound
  bool self_loop = false;  // must be set for from == to

  bool is_constant() const noexcept { return std::holds_alternative<Constant>(form); }
  friend bool operator==(const Coupling&, const Coupling&) = default;
};

class Network {
 public:
  std::size_t size() const noexcept { return subsystems_.size(); }
  std::size_t state_dim() const noexcept { return state_dim_; }
  const std::vector<Subsystem>& subsystems() const noexcept { return subsystems_; }
  const Subsystem& subsystem(std::size_t k) const { return subsystems_.at(k); }
  const std::vector<Coupling>& couplings() const noexcept { return couplings_; }
  // N_k in ascending order.
  const std::vector<std::size_t>& neighbors(std::size_t k) const { return neighbors_.at(k); }
  // Index of the coupling (to=k, from=j) inside couplings(), if any.
  std::optional<std::size_t> coupling_index(std::size_t to, std::size_t from) const;

  std::size_t offset(std::size_t k) const { return offsets_.at(k); }
  std::span<const double> block(std::span<const double> x, std::size_t k) const {
    return x.subspan(offsets_[k], subsystems_[k].dim());
  }

  // Concatenated equilibrium x*.
  Vector equilibrium() const;

  // Same subsystems with the listed coupling indices removed.
  Network without_couplings(std::span<const std::size_t> removed) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  friend Network build_network(std::vector<Subsystem>, std::vector<Coupling>);

  std::vector<Subsystem> subsystems_;
  std::vector<Coupling> couplings_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::size_t> offsets_;
  std::size_t state_dim_ = 0;
};

/// Validates and assembles a network. Throws ModelError on inconsistent
/// dimensions, out-of-range indices, duplicate (to, from) pairs, undeclared
/// self loops, or a coupling whose form can exceed its bound.
Network build_network(std::vector<Subsystem> subsystems, std::vector<Coupling> couplings);

double eval_coupling(const Network& net, const Coupling& c, std::span<const double> x, double t);

Vector eval_dynamics(const Network& net, std::span<const double> x, double t);
// out = x'(t); out must have state_dim() entries
void eval_dynamics_into(const Network& net, std::span<const double> x, double t,
                        std::span<double> out);

struct EquilibriumResidual {
  Vector residuals;          // per subsystem
  bool nominal_only = false; // a state-dependent coupling was frozen at (x*, t = 0)
};

EquilibriumResidual equilibrium_residual(const Network& net, std::span<const double> x_star);

}  // namespace hierlyap::model
