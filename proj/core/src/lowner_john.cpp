#include "loewner/lowner_john.hpp"

#include <cmath>

#include "loewner/errors.hpp"

namespace loewner {

CentralSolution solve_central(const std::vector<SymMat>& p_list,
                              ObjectiveKind kind, const SolverConfig& cfg) {
  if (p_list.empty()) {
    throw ValidationError("solve_central: no inputs");
  }
  std::vector<SymMat> atoms;
  atoms.reserve(p_list.size());
  for (const SymMat& p : p_list) atoms.push_back(inverse_spd(p));
  const SolveResult r = solve_simplex(kind, AtomSet(std::move(atoms)), cfg);
  return CentralSolution{r.m, r.lambda, r.f, r.iters, r.converged, r.gap};
}

NodeState init_node(int id, const SymMat& p0, double theta_bar) {
  if (!(theta_bar >= 1.0)) {
    throw ValidationError("init_node: theta_bar must be >= 1");
  }
  NodeState s;
  s.id = id;
  s.p = p0;
  s.q = inverse_spd(p0);
  s.weights.w.clear();
  s.theta_bar = theta_bar;
  s.p_floor = min_eigval(p0);
  return s;
}

LocalStepResult local_step(const NodeState& state,
                           const std::vector<SymMat>& neighbor_qs,
                           const SymMat& p_new, ObjectiveKind kind,
                           const SolverConfig& cfg) {
  if (!(state.theta_bar >= 1.0)) {
    throw ValidationError("local_step: theta_bar must be >= 1");
  }
  if (neighbor_qs.empty()) {
    throw ValidationError("local_step: closed neighborhood cannot be empty");
  }
  const double inv_theta = 1.0 / state.theta_bar;

  std::vector<SymMat> raw;
  raw.reserve(neighbor_qs.size() + 1);
  raw.push_back(inverse_spd(p_new));
  for (const SymMat& q : neighbor_qs) {
    if (q.dim() != p_new.dim()) {
      throw DimensionMismatch("local_step: neighbor estimate dim mismatch");
    }
    raw.push_back(q * inv_theta);
  }

  // Eigenvalue envelope of the atoms: any convex combination stays below it.
  double envelope = 0.0;
  for (const SymMat& a : raw) envelope = std::max(envelope, max_eigval(a));

  const SolveResult r = solve_simplex(kind, AtomSet(std::move(raw)), cfg);

  if (max_eigval(r.m) > envelope + 1e-8) {
    throw BoundednessViolation(
        "local_step: estimate escaped its combination envelope");
  }

  LocalStepResult out;
  out.state.id = state.id;
  out.state.p = p_new;
  out.state.q = r.m;
  out.state.weights = r.lambda;
  out.state.theta_bar = state.theta_bar;
  out.state.p_floor = std::min(state.p_floor, min_eigval(p_new));
  out.iters = r.iters;
  out.converged = r.converged;
  out.gap = r.gap;
  return out;
}

double adaptive_theta(const SymMat& p_prev, const SymMat& p_new, double kappa) {
  if (!(kappa > 0.0)) {
    throw ValidationError("adaptive_theta: kappa must be positive");
  }
  if (p_prev.dim() != p_new.dim()) {
    throw DimensionMismatch("adaptive_theta: dimension mismatch");
  }
  const Mat l = cholesky(p_new);
  const SymMat s = congruence_with_inverse_factor(l, p_prev);
  return std::max(1.0, kappa * max_eigval(s));
}

}  // namespace loewner
