// Distributed Kalman filtering where the fused prior covariance at each node
// is the tracked outer approximation of the network's intersection ellipsoid,
// plus two references to compare against: a consensus Kalman filter with a
// fixed-gain state-averaging term, and the centralized filter that stacks
// every measurement. Fused means are formed by dynamic consensus over the
// weighted prior informations.
#pragma once

#include <cstdint>
#include <vector>

#include "loewner/graph.hpp"
#include "loewner/lowner_john.hpp"
#include "loewner/mat.hpp"
#include "loewner/simulation.hpp"
#include "loewner/sym_mat.hpp"

namespace loewner {

struct LinearSystem {
  Mat a;                  // dynamics, general square
  SymMat w;               // process-noise covariance, PSD
  std::vector<Mat> h;     // per-node observation matrix, m_i x n
  std::vector<SymMat> v;  // per-node measurement-noise covariance, PD

  std::size_t dim() const { return a.rows(); }
  std::size_t nodes() const { return h.size(); }
  void validate() const;  // throws ValidationError / NotPositiveDefinite
};

struct FilterState {
  Vec x_hat;
  SymMat p_hat;  // PD
};

// Per-node memory of the mean-consensus tracker between filter steps.
struct ConsensusState {
  Vec z;       // tracker value
  Vec u_prev;  // local input at the previous step
};

// x_bar = A x_hat, P_bar = A P_hat A^T + W.
FilterState kf_predict(const FilterState& state, const LinearSystem& sys);

// Standard measurement update in Joseph form; the posterior covariance never
// exceeds the prior. Throws SingularInnovation when H P H^T + V is not
// invertible.
FilterState kf_update(const FilterState& pred, const Vec& y, const Mat& h,
                      const SymMat& v);

// Fused mean from the centralized solution: Q*^{-1} sum_j lambda_j P_j^{-1}
// x_bar_j.
Vec fuse_mean_exact(const SymMat& q_star, const WeightVector& lambdas,
                    const std::vector<SymMat>& p_list,
                    const std::vector<Vec>& xbar_list);

// Coefficient lambda_p / (1 - neighbor_weight_sum) on a node's own prior
// information. Both terms vanish together at the static fixed point (the own
// input carries no fresh weight and the neighbor weights saturate the
// budget); that 0/0 is continued with value 1, which is the coefficient's
// limit along the equality-reduced solution path. A vanishing denominator
// with nonvanishing numerator is floored at epsilon_clamp; either rescue is
// reported as an underflow.
struct FusionRatio {
  double value = 0.0;
  bool underflow = false;
};
FusionRatio fusion_ratio(double lambda_p, double neighbor_weight_sum,
                         double epsilon_clamp);

struct FusionNodeInput {
  SymMat q;       // node's fused information matrix
  SymMat p;       // node's current prior covariance
  Vec x_bar;      // node's current prior mean
  double lambda_p = 0.0;             // weight the node put on its own input
  double neighbor_weight_sum = 0.0;  // total weight on neighbor estimates
};

struct FusionOptions {
  long inner_rounds = 10;        // consensus sweeps per filter step
  double epsilon_clamp = 1e-8;   // denominator floor in fusion_ratio
  bool exact_average = false;    // oracle mode: use the true network average
};

struct FusionResult {
  std::vector<Vec> fused;            // per-node fused means
  long denominator_underflows = 0;   // fusion_ratio rescues this call
  double residual_disagreement = 0;  // max node distance from the true average
};

// One fused-mean exchange: each node forms u_i = ratio_i * P_i^{-1} x_bar_i,
// feeds it to a first-order dynamic-consensus integrator with Metropolis
// weights (inner_rounds sweeps), and returns Q_i^{-1} times its tracker
// value. `consensus` carries the integrator state across calls; pass it
// empty on the first step.
FusionResult fuse_mean_distributed(const std::vector<FusionNodeInput>& nodes,
                                   std::vector<ConsensusState>& consensus,
                                   const Graph& g, const FusionOptions& opt);

// Shared synthetic data for one run: every filter variant sees the same
// truth, the same measurements, and the same initial node beliefs, so MSE
// differences come from the filters alone.
struct DkfScenario {
  std::vector<Vec> truth;              // x[k], k = 0..horizon
  std::vector<std::vector<Vec>> meas;  // meas[k][i] = y_i[k]
  std::vector<Vec> x0;                 // initial prediction means
  std::vector<SymMat> p0;              // initial prediction covariances
};

// truth[0] ~ N(0, I); x0_i = truth[0] + N(0, I); p0_i random SPD with
// eigenvalues in [0.5, 2]; process and measurement noise from the system
// covariances. Deterministic in (sys shape, horizon, seed).
DkfScenario make_scenario(const LinearSystem& sys, long horizon,
                          std::uint64_t seed);

struct DkfOptions {
  ObjectiveKind kind = ObjectiveKind::NegLogDet;
  // Change-rate discount for the covariance-fusion step. Prediction inflates
  // covariances at a state-dependent rate, so the measured-rate mode is the
  // default here.
  ThetaPolicy theta{ThetaPolicy::Mode::Adaptive, 1.0, 1.0};
  SolverConfig solver;
  FusionOptions fusion;
  int local_steps_per_filter_step = 1;
};

struct CdkfOptions {
  double c = 0.1;  // consensus gain scale: gamma = c / (1 + ||P_bar||_F)
};

struct DkfNodeStep {
  Vec x_pred;  // prediction before any measurement or fusion at this step
  Vec x_post;  // posterior after the step
};

struct DkfRun {
  std::vector<Vec> truth;
  std::vector<std::vector<DkfNodeStep>> steps;  // [k][node]
  long denominator_underflows = 0;
  double max_residual_disagreement = 0.0;
  SolverStats solver;  // covariance-fusion solver workload (proposed only)
};

// The proposed filter. Per step: predict at every node; exchange predictions
// and previous fused informations; one covariance-fusion local step per node
// (P = prediction covariance); fused means by dynamic consensus; local
// measurement update from (fused mean, Q_i^{-1}). Step 0 initializes from
// the scenario beliefs and updates directly.
std::vector<DkfRun> run_dkf_proposed(const LinearSystem& sys, const Graph& g,
                                     long horizon,
                                     const std::vector<std::uint64_t>& seeds,
                                     const DkfOptions& opt = {});

// Consensus Kalman filter reference: local update plus a fixed-gain
// state-averaging term over neighbor predictions.
std::vector<DkfRun> run_cdkf_baseline(const LinearSystem& sys, const Graph& g,
                                      long horizon,
                                      const std::vector<std::uint64_t>& seeds,
                                      const CdkfOptions& opt = {});

// All measurements at one center: stacked observation matrix, block-diagonal
// noise. Initial belief is the average of the node beliefs.
std::vector<DkfRun> run_centralized_kf(const LinearSystem& sys, long horizon,
                                       const std::vector<std::uint64_t>& seeds);

// MSE[k] = mean over runs of the mean over nodes of |x_pred - truth|^2.
std::vector<double> mse_metric(const std::vector<DkfRun>& runs);

}  // namespace loewner
