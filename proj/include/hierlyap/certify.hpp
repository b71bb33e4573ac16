#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hierlyap/gains.hpp"
#include "hierlyap/matrix.hpp"
#include "hierlyap/model.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::certify {

enum class Kind { Nominal, Robust };

/// Diagonal -lambda_k + 2 mu_k, off-diagonal alpha_kj (alpha_bar_kj when Robust).
/// A declared self loop adds its gain to the diagonal.
struct StructureMatrix {
  Matrix entries;
  Kind kind = Kind::Nominal;
};

StructureMatrix build_structure_matrix(const gains::GainSet& g, Kind kind);

struct Dominance {
  bool dominant = false;
  Vector row_sums;  // a_kk + sum_{j != k} |a_kj|, negative means dominant
};

Dominance is_diagonally_dominant(const Matrix& m);
inline Dominance is_diagonally_dominant(const StructureMatrix& m) {
  return is_diagonally_dominant(m.entries);
}

// Strictness margin on every scaling LP row.
inline constexpr double kRowMargin = 1e-6;

struct Scaling {
  Vector c;
  double verify_eig = 0.0;  // lambda_max(M^T C + C M)
};

/// Gershgorin rows for a symmetric M^T C + C M that is dominant:
/// one row per k, written as coeffs . c <= -kRowMargin.
std::vector<numerics::LinearRow> dominance_rows(const Matrix& m);

/// lambda_max(M^T C + C M) for C = diag(c).
double scaled_max_eig(const Matrix& m, std::span<const double> c);

/// LP search for a diagonal C >= 1 making M^T C + C M negative definite,
/// minimizing sum_k w_k c_k (w defaults to ones). The LP answer is always
/// re-checked with an eigensolve. Empty when no dominant scaling exists.
std::optional<Scaling> find_scaling(const Matrix& m, std::span<const double> weights = {});

/// d_k^2 lambda_min(P_k) per subsystem.
Vector boundary_levels(const gains::GainSet& g);

/// min_k c_k d_k^2 lambda_min(P_k)
double v_min(std::span<const double> c, const gains::GainSet& g);

/// sum_k c_k (x_k - x*_k)^T P_k (x_k - x*_k)
double lyapunov_value(std::span<const double> x, std::span<const double> c, const gains::GainSet& g,
                      std::span<const double> x_star);

/// (x_k - x*_k)^T P_k (x_k - x*_k) per subsystem.
Vector lyapunov_contributions(std::span<const double> x, const gains::GainSet& g,
                              std::span<const double> x_star);

bool in_ball_set(std::span<const double> x, const gains::GainSet& g, std::span<const double> x_star);

struct StepRecord {
  std::size_t step = 0;
  double epsilon = 0.0;  // 0 for the first step
  double ceiling = 0.0;  // right-hand side of the V(x0) row, 0 for the first step
  bool accepted = false; // LP feasible and eigen-verified
  double v_x0 = 0.0;     // valid when accepted
  double v_min = 0.0;    // valid when accepted
};

struct Certificate {
  Vector c;
  double v_min = 0.0;
  double v_x0 = 0.0;
  double verify_eig = 0.0;
  Kind kind = Kind::Nominal;
  std::vector<StepRecord> trace;
};

bool in_invariant_set(std::span<const double> x, const Certificate& cert, const gains::GainSet& g,
                      std::span<const double> x_star);

enum class Reason {
  InDominantRegion,
  AdaptationSucceeded,
  NotInBallSet,
  AdaptationExhausted,
  NoScalingFound,
};

std::string_view to_string(Reason r);
std::string_view to_string(Kind k);

struct Verdict {
  bool certified = false;
  Reason reason = Reason::NoScalingFound;
  // Always set when certified; also carries the last certificate tried
  // for NotInBallSet and AdaptationExhausted when one exists.
  std::optional<Certificate> certificate;
};

struct AdaptOptions {
  std::optional<double> epsilon0;     // default 0.1 V_min of the first step
  std::optional<double> min_epsilon;  // default 1e-6 V_min of the first step
  std::size_t max_outer = 50;
};

/// Picks a Lyapunov function from the family for the initial state x0.
///
/// Step 1 solves the scaling LP with weights w_k = (x0_k - x*_k)^T P_k (x0_k - x*_k),
/// i.e. it minimizes V(x0). Later steps add
///     sum_k w_k c_k <= V_min(prev) - eps
/// together with c_k d_k^2 lambda_min(P_k) >= V_min(prev), which replaces the
/// c >= 1 floor so the sublevel boundary cannot shrink; eps halves whenever
/// the LP is infeasible. A successful certificate is rescaled to min_k c_k = 1.
Verdict adapt(const StructureMatrix& m, const gains::GainSet& g, std::span<const double> x0,
              std::span<const double> x_star, const AdaptOptions& options = {});

struct AssessOptions {
  Kind kind = Kind::Nominal;
  AdaptOptions adapt;
  gains::GainOptions gains;
};

struct StageTimings {
  double gains_ms = 0.0;
  double structure_ms = 0.0;
  double scaling_ms = 0.0;
  double adapt_ms = 0.0;
};

struct Assessment {
  Verdict verdict;
  gains::GainSet gains;
  StructureMatrix matrix;
  Dominance dominance;
  Vector x0;
  StageTimings timings;
};

/// Full pipeline; model and assumption errors propagate.
Assessment assess_detailed(const model::Network& net, std::span<const double> x0,
                           const AssessOptions& options = {});
Verdict assess(const model::Network& net, std::span<const double> x0, const AssessOptions& options = {});

struct ResilienceResult {
  Verdict baseline;                   // full network
  std::vector<Verdict> per_subset;    // one per removed-link subset
  // Certified baseline implies every reduced network certified.
  bool monotone = true;
};

/// Each subset lists coupling indices to drop. Without x0 the equilibrium is
/// used, so the verdict reduces to "a certificate exists".
ResilienceResult resilience_sweep(const model::Network& net,
                                  const std::vector<std::vector<std::size_t>>& link_subsets,
                                  std::optional<Vector> x0, const AssessOptions& options = {});

std::vector<std::vector<std::size_t>> single_link_subsets(const model::Network& net);

}  // namespace hierlyap::certify
