// Minimizes a strictly convex, Loewner-decreasing objective over convex
// combinations of PSD atoms.
//
// Feasible sets of the form { Q : 0 <= Q <= sum_l w_l A_l, w >= 0,
// sum_l w_l <= 1 } admit a two-step reduction that this solver exploits:
//   1. Because f is strictly decreasing in the Loewner order, the optimum
//      saturates the matrix upper bound: Q = sum_l w_l A_l.
//   2. Because f(c*M) is strictly decreasing in the scale c, the optimum
//      saturates the weight budget: sum_l w_l = 1.
// So the search space is exactly the unit simplex over the atoms, and the
// minimizer of f(M(w)) there is the solution of the original program.
//
// The simplex is handled with Frank-Wolfe iterations: the linear
// minimization oracle picks the steepest vertex (lowest index on ties), and
// a backtracking line search keeps every iterate feasible and the objective
// non-increasing. Away steps over the active vertices are taken when they
// offer more first-order progress than the forward step; they restore the
// linear convergence rate that plain forward steps lose when the optimum
// sits inside a face, and they can zero out a weight exactly.
#pragma once

#include <cstdint>
#include <vector>

#include "loewner/objective.hpp"

namespace loewner {

// Non-negative weights with sum at most one (small slack for roundoff).
struct WeightVector {
  std::vector<double> w;

  double sum() const;
  // Throws ValidationError when a weight is negative or the sum exceeds
  // 1 + 1e-10.
  void validate() const;
};

struct SolverConfig {
  int max_iters = 2000;
  double gap_tol = 1e-9;           // duality-gap stopping threshold
  double line_search_shrink = 0.5;  // backtracking factor in (0,1)
  bool operator==(const SolverConfig&) const = default;
};

struct SolveResult {
  WeightVector lambda;  // optimal weights, sum exactly 1
  SymMat m;             // the combination sum_l lambda_l A_l (single pass)
  double f = 0.0;       // objective at m
  int iters = 0;
  bool converged = true;  // false when max_iters hit or progress stalled
  double gap = 0.0;       // final duality gap estimate
};

SolveResult solve_simplex(ObjectiveKind kind, const AtomSet& atoms,
                          const SolverConfig& cfg = {});

struct BruteForceResult {
  WeightVector lambda;
  double f = 0.0;
  double grad_norm = 0.0;          // |grad| at the best lattice point
  double optimality_margin = 0.0;  // grad_norm * grid_step * sqrt(m)
};

// Exhaustive search over the lattice { k/g : sum k = g }, g = round(1/step).
// The returned f is within optimality_margin of the true simplex minimum.
// Throws GridTooLarge when the lattice exceeds 1e8 points.
BruteForceResult brute_force_simplex(ObjectiveKind kind, const AtomSet& atoms,
                                     double grid_step);

}  // namespace loewner
