#pragma once

// Built-in benchmark: a ring of 20 scalar subsystems
//
//   x_k' = -10 x_k + a_k x_k^2 + u_k,   y_k = x_k,
//
// a_k = 0.9 for k <= 10 and k/20 above, with time-varying ring couplings
// L_{k,k+1} = 1.9 sin x_k and L_{k+1,k} = -1.8 cos x_k, d_k = 6, P_k = 1/2,
// and initial state x_k(0) = 0.2 (k - 10).

#include <cstddef>

#include "hierlyap/io.hpp"

namespace hierlyap::example {

inline constexpr std::size_t kRingSize = 20;

// Reference data in 1-based subsystem numbering.
double ring_a(std::size_t k);
double ring_initial(std::size_t k);

io::NetworkConfig ring_config();

}  // namespace hierlyap::example
