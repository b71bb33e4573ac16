#pragma once

// Small dense numerical kernels: symmetric eigendecomposition, spectral
// norm, continuous Lyapunov equation, LP feasibility, and the infinity-norm
// matrix measure. All functions are pure.

#include <cstddef>
#include <vector>

#include "hierlyap/matrix.hpp"

namespace hierlyap::numerics {

// Absolute slack allowed on LP rows.
inline constexpr double kFeasibilityTol = 1e-9;
// Relative reconstruction / definiteness tolerance for eigen results.
inline constexpr double kEigenResidualTol = 1e-8;
// Entry-wise asymmetry accepted (relative to max(1, |S|_F)) before sym_eig refuses.
inline constexpr double kSymmetryTol = 1e-9;

struct SymEig {
  Vector eigenvalues;  // ascending
  double min = 0.0;
  double max = 0.0;
  Matrix vectors;      // column i is the unit eigenvector of eigenvalues[i]
};

/// Cyclic Jacobi eigensolver. The input is symmetrized by averaging first;
/// throws DimensionError for non-square or visibly non-symmetric input.
SymEig sym_eig(const Matrix& s);

/// Induced 2-norm: sqrt of the largest eigenvalue of X^T X.
double spectral_norm(const Matrix& x);

/// Solves A^T P + P A = -Q for symmetric positive definite P through the
/// vectorized (Kronecker) linear system. Throws NoSolution when the system is
/// singular or P is not positive definite, which happens exactly when A is
/// not Hurwitz.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// Dense LU with partial pivoting. Empty result when A is numerically singular.
std::vector<double> lu_solve(Matrix a, Vector b);

/// coeffs . c <= rhs
struct LinearRow {
  Vector coeffs;
  double rhs = 0.0;
};

struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<LinearRow> rows;
  // Per-variable lower bounds; empty means every c_k >= 1.
  Vector lower;
  // Minimized; empty means zero objective (pure feasibility).
  Vector objective;
};

enum class LpStatus { Feasible, Infeasible };

struct FeasibilityResult {
  LpStatus status = LpStatus::Infeasible;
  Vector solution;               // present iff Feasible
  double objective = 0.0;        // objective at solution
  double phase1_residual = 0.0;  // artificial objective left after phase 1
  bool unbounded = false;        // objective unbounded below; solution is some feasible vertex

  bool feasible() const noexcept { return status == LpStatus::Feasible; }
};

/// Two-phase dense-tableau simplex with Bland's anti-cycling rule.
FeasibilityResult lp_feasible(const LpProblem& problem);

/// mu_inf(A) = max_i (a_ii + sum_{j != i} |a_ij|)
double matrix_measure_inf(const Matrix& a);

}  // namespace hierlyap::numerics
