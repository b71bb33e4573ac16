#include <chrono>
#include <future>
#include <thread>

#include "hierlyap/certify.hpp"
#include "hierlyap/errors.hpp"
#include "hierlyap/kernels.hpp"

namespace hierlyap::certify {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

Assessment assess_detailed(const model::Network& net, std::span<const double> x0,
                           const AssessOptions& options) {
  if (x0.size() != net.state_dim()) throw DimensionError("assess: initial state has the wrong dimension");
  Assessment a;
  a.x0.assign(x0.begin(), x0.end());
  const Vector x_star = net.equilibrium();

  auto t0 = Clock::now();
  a.gains = gains::build_gain_set(net, options.gains);
  a.timings.gains_ms = ms_since(t0);

  t0 = Clock::now();
  a.matrix = build_structure_matrix(a.gains, options.kind);
  a.dominance = is_diagonally_dominant(a.matrix);
  a.timings.structure_ms = ms_since(t0);

  t0 = Clock::now();
  const std::optional<Scaling> scaling = find_scaling(a.matrix.entries);
  a.timings.scaling_ms = ms_since(t0);
  if (!scaling) {
    a.verdict.reason = Reason::NoScalingFound;
    return a;
  }

  const Vector w = lyapunov_contributions(x0, a.gains, x_star);
  Certificate cert;
  cert.c = scaling->c;
  cert.verify_eig = scaling->verify_eig;
  cert.v_min = v_min(cert.c, a.gains);
  cert.v_x0 = kernels::dot(cert.c, w);
  cert.kind = options.kind;
  cert.trace.push_back({1, 0.0, 0.0, true, cert.v_x0, cert.v_min});

  if (!in_ball_set(x0, a.gains, x_star)) {
    a.verdict.reason = Reason::NotInBallSet;
    a.verdict.certificate = std::move(cert);
    return a;
  }
  if (cert.v_x0 < cert.v_min) {
    a.verdict.certified = true;
    a.verdict.reason = Reason::InDominantRegion;
    a.verdict.certificate = std::move(cert);
    return a;
  }

  t0 = Clock::now();
  a.verdict = adapt(a.matrix, a.gains, x0, x_star, options.adapt);
  a.timings.adapt_ms = ms_since(t0);
  return a;
}

Verdict assess(const model::Network& net, std::span<const double> x0, const AssessOptions& options) {
  return assess_detailed(net, x0, options).verdict;
}

std::vector<std::vector<std::size_t>> single_link_subsets(const model::Network& net) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(net.couplings().size());
  for (std::size_t i = 0; i < net.couplings().size(); ++i) out.push_back({i});
  return out;
}

ResilienceResult resilience_sweep(const model::Network& net,
                                  const std::vector<std::vector<std::size_t>>& link_subsets,
                                  std::optional<Vector> x0, const AssessOptions& options) {
  const Vector start = x0 ? *x0 : net.equilibrium();
  for (const auto& subset : link_subsets)
    for (std::size_t idx : subset)
      if (idx >= net.couplings().size()) throw ModelError("resilience subset names a coupling that does not exist");

  ResilienceResult r;
  r.baseline = assess(net, start, options);
  r.per_subset.resize(link_subsets.size());

  // Independent assessments; results land at their subset index.
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t next = 0;
  while (next < link_subsets.size()) {
    std::vector<std::future<Verdict>> batch;
    const std::size_t end = std::min(link_subsets.size(), next + workers);
    for (std::size_t i = next; i < end; ++i) {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                 [&, i] { return assess(net.without_couplings(link_subsets[i]), start, options); }));
    }
    for (std::size_t i = next; i < end; ++i) r.per_subset[i] = batch[i - next].get();
    next = end;
  }

  if (r.baseline.certified) {
    for (const Verdict& v : r.per_subset)
      if (!v.certified) r.monotone = false;
  }
  return r;
}

}  // namespace hierlyap::certify
