#include <cmath>
#include <numeric>
#include <string>

#include "hierlyap/errors.hpp"
#include "hierlyap/model.hpp"

namespace hierlyap::model {

Polynomial::Polynomial(std::size_t arity, std::vector<Monomial> terms)
    : arity_(arity), terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Monomial& t = terms_[i];
    const std::string where = "polynomial term " + std::to_string(i + 1);
    if (t.exponents.size() != arity_)
      throw ModelError(where + ": exponent vector length " + std::to_string(t.exponents.size()) +
                       " does not match state dimension " + std::to_string(arity_));
    if (t.output >= arity_) throw ModelError(where + ": output component out of range");
    if (!std::isfinite(t.coeff)) throw ModelError(where + ": coefficient is not finite");
    const unsigned degree = std::accumulate(t.exponents.begin(), t.exponents.end(), 0u);
    if (degree < 2)
      throw ModelError(where + ": total degree must be at least 2 (linear terms belong in A)");
  }
}

void Polynomial::accumulate(std::span<const double> x, std::span<double> out) const {
  for (const Monomial& t : terms_) {
    double v = t.coeff;
    for (std::size_t i = 0; i < arity_; ++i) {
      for (unsigned e = 0; e < t.exponents[i]; ++e) v *= x[i];
    }
    out[t.output] += v;
  }
}

Vector Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != arity_) throw DimensionError("polynomial evaluated at a point of the wrong dimension");
  Vector out(arity_, 0.0);
  accumulate(x, out);
  return out;
}

std::optional<Polynomial::ScalarMonomial> Polynomial::as_scalar_monomial() const {
  if (arity_ != 1 || terms_.size() != 1) return std::nullopt;
  return ScalarMonomial{terms_[0].coeff, terms_[0].exponents[0]};
}

}  // namespace hierlyap::model
