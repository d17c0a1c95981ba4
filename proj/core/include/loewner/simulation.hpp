// Synchronous rounds of the distributed outer-approximation consensus over
// a graph, with an optional centralized oracle solved alongside for error
// metrics. Each round every node sees only the previous round's neighbor
// estimates, so evaluation order within a round cannot matter.
#pragma once

#include <optional>
#include <vector>

#include "loewner/graph.hpp"
#include "loewner/lowner_john.hpp"
#include "loewner/trajectory.hpp"

namespace loewner {

struct ThetaPolicy {
  enum class Mode { Fixed, Adaptive };
  Mode mode = Mode::Fixed;
  double theta_bar = 1.0;  // Fixed: used as-is (must be >= 1)
  double kappa = 1.0;      // Adaptive: scale on the measured change rate
};

struct NodeRound {
  SymMat p;              // input this round
  SymMat q;              // estimate after the round
  WeightVector weights;  // empty at k = 0
  double f = 0.0;
  std::vector<double> eigs;  // of q, ascending
  double theta_used = 1.0;
  int iters = 0;
  bool converged = true;
  double gap = 0.0;
};

struct OracleRound {
  SymMat q_star;
  WeightVector lambda;
  double f = 0.0;
  std::vector<double> eigs;  // ascending
};

struct Round {
  long k = 0;
  std::vector<NodeRound> nodes;
  std::optional<OracleRound> oracle;
  double p_floor_global = 0.0;  // running min input eigenvalue through k
};

struct SolverStats {
  long solves = 0;
  long total_iters = 0;
  int max_iters_single = 0;
  long nonconverged = 0;
  double max_gap = 0.0;

  void absorb(int iters, bool converged, double gap);
};

struct RoundHistory {
  std::size_t n_nodes = 0;
  std::size_t dim = 0;
  std::vector<Round> rounds;  // index = k, from 0
  SolverStats stats;
};

struct SimulationOptions {
  long rounds = 1;
  ObjectiveKind kind = ObjectiveKind::NegLogDet;
  ThetaPolicy theta;
  SolverConfig solver;
  // Solve the centralized program every this many rounds (0 = never;
  // round 0 is included whenever enabled).
  long oracle_every = 1;
};

// Runs `rounds` exchange rounds after initialization. Enforces the global
// eigenvalue bound max_eig(Q_i[k]) <= 1/p_floor + 1e-8 every round, and the
// per-node objective descent f(Q_i[k]) <= f(Q_i[k-1]) + 1e-9 when every
// trajectory is constant and theta is fixed at exactly 1.
RoundHistory run_simulation(const Graph& graph,
                            const std::vector<InputTrajectory>& trajectories,
                            const SimulationOptions& opt);

struct EigErrorRow {
  long k = 0;
  int node = 0;       // 0-based
  int eig_index = 0;  // ascending order position
  double q_node = 0.0;
  double q_star = 0.0;
  double abs_err = 0.0;
  double f_node = 0.0;
  double f_star = 0.0;
};

struct AveragedEigRow {
  long k = 0;
  int eig_index = 0;
  double q_avg = 0.0;  // network average of the node eigenvalues
  double q_star = 0.0;
  double abs_err = 0.0;
};

struct ErrorMetrics {
  std::vector<EigErrorRow> rows;          // rounds with an oracle only
  std::vector<AveragedEigRow> averaged;
};

ErrorMetrics eigen_error_metrics(const RoundHistory& history);

}  // namespace loewner
