// Tightest outer ellipsoidal approximation of an intersection of ellipsoids,
// in information-matrix form, plus the node-local step of its distributed
// counterpart: each node combines its fresh input with discounted neighbor
// estimates and re-solves the same kind of simplex program.
#pragma once

#include <vector>

#include "loewner/simplex_solver.hpp"

namespace loewner {

struct CentralSolution {
  SymMat q_star;        // optimal information matrix
  WeightVector lambda;  // weights over the input inverses, sum 1
  double f = 0.0;
  int iters = 0;
  bool converged = true;
  double gap = 0.0;
};

// Solves the global program over inputs given in covariance form: the
// candidate set is the simplex hull of { P_j^{-1} }.
CentralSolution solve_central(const std::vector<SymMat>& p_list,
                              ObjectiveKind kind, const SolverConfig& cfg = {});

struct NodeState {
  int id = 0;            // node index (0-based internally)
  SymMat p;              // latest input, covariance form
  SymMat q;              // current information estimate
  WeightVector weights;  // over {own input} then neighbors ascending id
  double theta_bar = 1.0;  // change-rate discount, >= 1
  double p_floor = 0.0;    // running min eigenvalue of this node's inputs
};

// Fresh node: estimate is the inverse of the initial input, weights empty.
NodeState init_node(int id, const SymMat& p0, double theta_bar);

struct LocalStepResult {
  NodeState state;
  int iters = 0;
  bool converged = true;
  double gap = 0.0;
};

// One synchronous round at a node: atoms are the inverse of the new input
// followed by each neighbor estimate (ascending id, own estimate included)
// scaled by 1/theta_bar. Pure: returns the successor state. Throws
// BoundednessViolation if the result escapes the convex-combination
// eigenvalue envelope of its atoms (solver defect, not expected).
LocalStepResult local_step(const NodeState& state,
                           const std::vector<SymMat>& neighbor_qs,
                           const SymMat& p_new, ObjectiveKind kind,
                           const SolverConfig& cfg = {});

// Scalar change-rate discount from consecutive inputs:
// max(1, kappa * max eigenvalue of P_new^{-1/2} P_prev P_new^{-1/2}).
double adaptive_theta(const SymMat& p_prev, const SymMat& p_new, double kappa);

}  // namespace loewner
