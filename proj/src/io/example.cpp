#include "hierlyap/example.hpp"

namespace hierlyap::example {

double ring_a(std::size_t k) { return k <= 10 ? 0.9 : static_cast<double>(k) / 20.0; }

double ring_initial(std::size_t k) { return 0.2 * (static_cast<double>(k) - 10.0); }

io::NetworkConfig ring_config() {
  std::vector<model::Subsystem> subs;
  for (std::size_t k = 1; k <= kRingSize; ++k) {
    model::Subsystem s;
    s.A = Matrix{{-10.0}};
    s.B = {1.0};
    s.C = {1.0};
    s.f = model::Polynomial(1, {model::Monomial{ring_a(k), {2}, 0}});
    s.x_star = {0.0};
    s.d = 6.0;
    s.P = Matrix{{0.5}};
    subs.push_back(std::move(s));
  }

  std::vector<model::Coupling> couplings;
  for (std::size_t k = 0; k < kRingSize; ++k) {
    const std::size_t next = (k + 1) % kRingSize;
    couplings.push_back({next, k, model::SinOfState{1.9, k, 0, 0.0}, 1.9, false});
    couplings.push_back({k, next, model::CosOfState{-1.8, k, 0, 0.0}, 1.8, false});
  }

  io::NetworkConfig cfg;
  cfg.seed = io::kDefaultSeed;
  cfg.network = model::build_network(std::move(subs), std::move(couplings));
  Vector x0;
  for (std::size_t k = 1; k <= kRingSize; ++k) x0.push_back(ring_initial(k));
  cfg.initial_state = std::move(x0);
  return cfg;
}

}  // namespace hierlyap::example
