#include "loewner/dkf.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "loewner/errors.hpp"
#include "loewner/psd.hpp"
#include "loewner/random_spd.hpp"

namespace loewner {

namespace {

double vec_norm(const Vec& x) { return std::sqrt(dot(x, x)); }

SymMat congruence(const Mat& a, const SymMat& s) {
  return SymMat::symmetrized(a * s.mat() * a.transpose());
}

}  // namespace

void LinearSystem::validate() const {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw ValidationError("dynamics matrix must be square and nonempty");
  }
  if (w.dim() != a.rows()) {
    throw DimensionMismatch("process-noise covariance dimension mismatch");
  }
  if (min_eigval(w) < -PsdTolerance{}.eig_floor) {
    throw NotPositiveDefinite("process-noise covariance has negative spectrum");
  }
  if (h.empty() || h.size() != v.size()) {
    throw ValidationError("need one observation matrix and one noise "
                          "covariance per node");
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].cols() != a.rows() || h[i].rows() == 0) {
      throw DimensionMismatch("observation matrix shape mismatch");
    }
    if (v[i].dim() != h[i].rows()) {
      throw DimensionMismatch("measurement-noise covariance shape mismatch");
    }
    if (min_eigval(v[i]) <= 0.0) {
      throw NotPositiveDefinite("measurement-noise covariance must be PD");
    }
  }
}

FilterState kf_predict(const FilterState& state, const LinearSystem& sys) {
  if (state.x_hat.size() != sys.dim() || state.p_hat.dim() != sys.dim()) {
    throw DimensionMismatch("filter state does not match the system");
  }
  FilterState out;
  out.x_hat = sys.a * state.x_hat;
  out.p_hat = SymMat::symmetrized(congruence(sys.a, state.p_hat).mat() +
                                  sys.w.mat());
  return out;
}

FilterState kf_update(const FilterState& pred, const Vec& y, const Mat& h,
                      const SymMat& v) {
  const std::size_t n = pred.x_hat.size();
  const std::size_t m = h.rows();
  if (h.cols() != n || v.dim() != m || y.size() != m) {
    throw DimensionMismatch("measurement shapes do not match the state");
  }

  const Mat pht = pred.p_hat.mat() * h.transpose();  // n x m
  SymMat innov = SymMat::symmetrized(h * pht + v.mat());
  Mat innov_chol;
  try {
    innov_chol = cholesky(innov);
  } catch (const NotPositiveDefinite&) {
    throw SingularInnovation("innovation covariance is not invertible");
  }

  // Gain K = P H^T S^{-1}, row by row through the factorization.
  Mat gain(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    Vec row(m);
    for (std::size_t c = 0; c < m; ++c) row[c] = pht(r, c);
    const Vec sol =
        solve_lower_transposed(innov_chol, solve_lower(innov_chol, row));
    for (std::size_t c = 0; c < m; ++c) gain(r, c) = sol[c];
  }

  Vec residual = y - h * pred.x_hat;
  FilterState out;
  out.x_hat = pred.x_hat + gain * residual;

  // Joseph form keeps the posterior symmetric PSD under roundoff.
  Mat closed = Mat::identity(n) - gain * h;
  Mat joseph = closed * pred.p_hat.mat() * closed.transpose() +
               gain * v.mat() * gain.transpose();
  out.p_hat = SymMat::symmetrized(joseph);
  return out;
}

Vec fuse_mean_exact(const SymMat& q_star, const WeightVector& lambdas,
                    const std::vector<SymMat>& p_list,
                    const std::vector<Vec>& xbar_list) {
  if (lambdas.w.size() != p_list.size() ||
      p_list.size() != xbar_list.size() || p_list.empty()) {
    throw DimensionMismatch("fusion inputs must align one weight per node");
  }
  const std::size_t n = q_star.dim();
  Vec accum(n, 0.0);
  for (std::size_t j = 0; j < p_list.size(); ++j) {
    if (lambdas.w[j] == 0.0) continue;
    accum += lambdas.w[j] * solve_spd(p_list[j], xbar_list[j]);
  }
  return solve_spd(q_star, accum);  // throws NotPositiveDefinite via cholesky
}

FusionRatio fusion_ratio(double lambda_p, double neighbor_weight_sum,
                         double epsilon_clamp) {
  if (epsilon_clamp <= 0.0) {
    throw ValidationError("epsilon_clamp must be positive");
  }
  const double denom = 1.0 - neighbor_weight_sum;
  if (lambda_p <= epsilon_clamp && denom <= epsilon_clamp) {
    return {1.0, true};  // joint limit along the weight-budget boundary
  }
  if (denom <= epsilon_clamp) {
    return {lambda_p / epsilon_clamp, true};
  }
  return {lambda_p / denom, false};
}

FusionResult fuse_mean_distributed(const std::vector<FusionNodeInput>& nodes,
                                   std::vector<ConsensusState>& consensus,
                                   const Graph& g, const FusionOptions& opt) {
  const std::size_t n_nodes = nodes.size();
  if (n_nodes == 0 || n_nodes != g.n_nodes()) {
    throw DimensionMismatch("one fusion input per graph node required");
  }
  if (opt.inner_rounds < 1) {
    throw ValidationError("inner_rounds must be at least 1");
  }
  if (consensus.empty()) {
    consensus.resize(n_nodes);
  } else if (consensus.size() != n_nodes) {
    throw DimensionMismatch("consensus state size does not match the graph");
  }
  const std::size_t dim = nodes[0].x_bar.size();

  FusionResult out;
  std::vector<Vec> inputs(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (nodes[i].x_bar.size() != dim) {
      throw DimensionMismatch("fusion inputs disagree on state dimension");
    }
    const FusionRatio ratio = fusion_ratio(
        nodes[i].lambda_p, nodes[i].neighbor_weight_sum, opt.epsilon_clamp);
    if (ratio.underflow) ++out.denominator_underflows;
    inputs[i] = ratio.value * solve_spd(nodes[i].p, nodes[i].x_bar);
  }

  // Dynamic-consensus input injection: z absorbs the change in u, keeping
  // the network sum of z equal to the network sum of the current inputs.
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (consensus[i].u_prev.empty()) {
      consensus[i].z = inputs[i];
    } else {
      consensus[i].z += inputs[i] - consensus[i].u_prev;
    }
    consensus[i].u_prev = inputs[i];
  }

  Vec average(dim, 0.0);
  for (const Vec& u : inputs) average += u;
  average = (1.0 / static_cast<double>(n_nodes)) * average;

  if (opt.exact_average) {
    for (auto& c : consensus) c.z = average;
  } else {
    std::vector<Vec> next(n_nodes);
    for (long r = 0; r < opt.inner_rounds; ++r) {
      for (std::size_t i = 0; i < n_nodes; ++i) {
        Vec zi = consensus[i].z;
        for (int j : g.closed_neighborhood(static_cast<int>(i))) {
          if (j == static_cast<int>(i)) continue;
          const double a =
              1.0 / (1.0 + static_cast<double>(std::max(
                         g.degree(static_cast<int>(i)), g.degree(j))));
          zi += a * (consensus[j].z - consensus[i].z);
        }
        next[i] = std::move(zi);
      }
      for (std::size_t i = 0; i < n_nodes; ++i) {
        consensus[i].z = std::move(next[i]);
      }
    }
  }

  out.fused.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    out.residual_disagreement =
        std::max(out.residual_disagreement, vec_norm(consensus[i].z - average));
    out.fused[i] = solve_spd(nodes[i].q, consensus[i].z);
  }
  return out;
}

DkfScenario make_scenario(const LinearSystem& sys, long horizon,
                          std::uint64_t seed) {
  sys.validate();
  if (horizon < 0) throw ValidationError("horizon must be nonnegative");
  const std::size_t n = sys.dim();
  const std::size_t n_nodes = sys.nodes();
  const Rng root(seed);

  DkfScenario sc;
  Rng truth_rng = root.fork(0);
  sc.truth.resize(static_cast<std::size_t>(horizon) + 1);
  sc.truth[0] = random_normal_vec(truth_rng, n);
  for (long k = 1; k <= horizon; ++k) {
    sc.truth[static_cast<std::size_t>(k)] =
        sys.a * sc.truth[static_cast<std::size_t>(k) - 1] +
        sample_gaussian(truth_rng, sys.w);
  }

  sc.meas.assign(static_cast<std::size_t>(horizon) + 1,
                 std::vector<Vec>(n_nodes));
  for (std::size_t i = 0; i < n_nodes; ++i) {
    Rng meas_rng = root.fork(1 + static_cast<std::uint64_t>(i));
    for (long k = 0; k <= horizon; ++k) {
      sc.meas[static_cast<std::size_t>(k)][i] =
          sys.h[i] * sc.truth[static_cast<std::size_t>(k)] +
          sample_gaussian(meas_rng, sys.v[i]);
    }
  }

  sc.x0.resize(n_nodes);
  sc.p0.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    Rng init_rng = root.fork(1000 + static_cast<std::uint64_t>(i));
    sc.x0[i] = sc.truth[0] + random_normal_vec(init_rng, n);
    sc.p0.push_back(random_spd(init_rng, n, 0.5, 2.0));
  }
  return sc;
}

namespace {

DkfRun run_proposed_once(const LinearSystem& sys, const Graph& g, long horizon,
                         std::uint64_t seed, const DkfOptions& opt) {
  const std::size_t n_nodes = sys.nodes();
  const DkfScenario sc = make_scenario(sys, horizon, seed);

  DkfRun run;
  run.truth = sc.truth;
  run.steps.assign(static_cast<std::size_t>(horizon) + 1,
                   std::vector<DkfNodeStep>(n_nodes));

  const bool fixed_theta = opt.theta.mode == ThetaPolicy::Mode::Fixed;
  std::vector<NodeState> nodes;
  std::vector<FilterState> posts(n_nodes);
  std::vector<ConsensusState> consensus;
  nodes.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    nodes.push_back(init_node(static_cast<int>(i), sc.p0[i],
                              fixed_theta ? opt.theta.theta_bar : 1.0));
    posts[i] = kf_update({sc.x0[i], sc.p0[i]}, sc.meas[0][i], sys.h[i],
                         sys.v[i]);
    run.steps[0][i] = {sc.x0[i], posts[i].x_hat};
  }

  for (long k = 1; k <= horizon; ++k) {
    std::vector<FilterState> preds(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      preds[i] = kf_predict(posts[i], sys);
    }

    for (int pass = 0; pass < opt.local_steps_per_filter_step; ++pass) {
      std::vector<SymMat> frozen;
      frozen.reserve(n_nodes);
      for (const NodeState& s : nodes) frozen.push_back(s.q);
      for (std::size_t i = 0; i < n_nodes; ++i) {
        nodes[i].theta_bar =
            fixed_theta ? opt.theta.theta_bar
                        : adaptive_theta(nodes[i].p, preds[i].p_hat,
                                         opt.theta.kappa);
        std::vector<SymMat> neighbor_qs;
        const auto& hood = g.closed_neighborhood(static_cast<int>(i));
        neighbor_qs.reserve(hood.size());
        for (int j : hood) neighbor_qs.push_back(frozen[static_cast<std::size_t>(j)]);
        LocalStepResult res = local_step(nodes[i], neighbor_qs,
                                         preds[i].p_hat, opt.kind, opt.solver);
        run.solver.absorb(res.iters, res.converged, res.gap);
        nodes[i] = std::move(res.state);
      }
    }

    std::vector<FusionNodeInput> fusion_in(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      double neighbor_sum = 0.0;
      for (std::size_t l = 1; l < nodes[i].weights.w.size(); ++l) {
        neighbor_sum += nodes[i].weights.w[l];
      }
      fusion_in[i] = {nodes[i].q, preds[i].p_hat, preds[i].x_hat,
                      nodes[i].weights.w.empty() ? 0.0 : nodes[i].weights.w[0],
                      neighbor_sum};
    }
    const FusionResult fused =
        fuse_mean_distributed(fusion_in, consensus, g, opt.fusion);
    run.denominator_underflows += fused.denominator_underflows;
    run.max_residual_disagreement = std::max(run.max_residual_disagreement,
                                             fused.residual_disagreement);

    for (std::size_t i = 0; i < n_nodes; ++i) {
      posts[i] = kf_update({fused.fused[i], inverse_spd(nodes[i].q)},
                           sc.meas[static_cast<std::size_t>(k)][i], sys.h[i],
                           sys.v[i]);
      run.steps[static_cast<std::size_t>(k)][i] = {preds[i].x_hat,
                                                   posts[i].x_hat};
    }
  }
  return run;
}

DkfRun run_cdkf_once(const LinearSystem& sys, const Graph& g, long horizon,
                     std::uint64_t seed, const CdkfOptions& opt) {
  const std::size_t n_nodes = sys.nodes();
  const DkfScenario sc = make_scenario(sys, horizon, seed);

  DkfRun run;
  run.truth = sc.truth;
  run.steps.assign(static_cast<std::size_t>(horizon) + 1,
                   std::vector<DkfNodeStep>(n_nodes));

  std::vector<FilterState> posts(n_nodes);
  std::vector<FilterState> preds(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    preds[i] = {sc.x0[i], sc.p0[i]};
  }

  for (long k = 0; k <= horizon; ++k) {
    if (k > 0) {
      for (std::size_t i = 0; i < n_nodes; ++i) {
        preds[i] = kf_predict(posts[i], sys);
      }
    }
    for (std::size_t i = 0; i < n_nodes; ++i) {
      FilterState local = kf_update(
          preds[i], sc.meas[static_cast<std::size_t>(k)][i], sys.h[i],
          sys.v[i]);
      const double gamma =
          opt.c / (1.0 + frobenius_norm(preds[i].p_hat.mat()));
      Vec pull(sys.dim(), 0.0);
      for (int j : g.closed_neighborhood(static_cast<int>(i))) {
        if (j == static_cast<int>(i)) continue;
        pull += preds[static_cast<std::size_t>(j)].x_hat - preds[i].x_hat;
      }
      local.x_hat += gamma * pull;
      posts[i] = std::move(local);
      run.steps[static_cast<std::size_t>(k)][i] = {preds[i].x_hat,
                                                   posts[i].x_hat};
    }
  }
  return run;
}

DkfRun run_centralized_once(const LinearSystem& sys, long horizon,
                            std::uint64_t seed) {
  const std::size_t n = sys.dim();
  const std::size_t n_nodes = sys.nodes();
  const DkfScenario sc = make_scenario(sys, horizon, seed);

  std::size_t m_total = 0;
  for (const Mat& hi : sys.h) m_total += hi.rows();
  Mat h_stack(m_total, n);
  Mat v_stack(m_total, m_total);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t r = 0; r < sys.h[i].rows(); ++r) {
      for (std::size_t c = 0; c < n; ++c) h_stack(row + r, c) = sys.h[i](r, c);
      for (std::size_t c = 0; c < sys.h[i].rows(); ++c) {
        v_stack(row + r, row + c) = sys.v[i](r, c);
      }
    }
    row += sys.h[i].rows();
  }
  const SymMat v_block(v_stack);

  DkfRun run;
  run.truth = sc.truth;
  run.steps.assign(static_cast<std::size_t>(horizon) + 1,
                   std::vector<DkfNodeStep>(1));

  Vec x0(n, 0.0);
  Mat p0_sum(n, n);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    x0 += sc.x0[i];
    p0_sum += sc.p0[i].mat();
  }
  const double inv_nodes = 1.0 / static_cast<double>(n_nodes);
  FilterState pred{inv_nodes * x0, SymMat::symmetrized(p0_sum * inv_nodes)};

  FilterState post;
  for (long k = 0; k <= horizon; ++k) {
    if (k > 0) pred = kf_predict(post, sys);
    Vec y(m_total);
    std::size_t at = 0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
      for (double yi : sc.meas[static_cast<std::size_t>(k)][i]) y[at++] = yi;
    }
    post = kf_update(pred, y, h_stack, v_block);
    run.steps[static_cast<std::size_t>(k)][0] = {pred.x_hat, post.x_hat};
  }
  return run;
}

}  // namespace

std::vector<DkfRun> run_dkf_proposed(const LinearSystem& sys, const Graph& g,
                                     long horizon,
                                     const std::vector<std::uint64_t>& seeds,
                                     const DkfOptions& opt) {
  sys.validate();
  if (g.n_nodes() != sys.nodes()) {
    throw DimensionMismatch("graph size does not match the sensor count");
  }
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  if (opt.local_steps_per_filter_step < 1) {
    throw ValidationError("need at least one fusion step per filter step");
  }
  std::vector<DkfRun> runs;
  runs.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    runs.push_back(run_proposed_once(sys, g, horizon, seed, opt));
  }
  return runs;
}

std::vector<DkfRun> run_cdkf_baseline(const LinearSystem& sys, const Graph& g,
                                      long horizon,
                                      const std::vector<std::uint64_t>& seeds,
                                      const CdkfOptions& opt) {
  sys.validate();
  if (g.n_nodes() != sys.nodes()) {
    throw DimensionMismatch("graph size does not match the sensor count");
  }
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  std::vector<DkfRun> runs;
  runs.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    runs.push_back(run_cdkf_once(sys, g, horizon, seed, opt));
  }
  return runs;
}

std::vector<DkfRun> run_centralized_kf(const LinearSystem& sys, long horizon,
                                       const std::vector<std::uint64_t>& seeds) {
  sys.validate();
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  std::vector<DkfRun> runs;
  runs.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    runs.push_back(run_centralized_once(sys, horizon, seed));
  }
  return runs;
}

std::vector<double> mse_metric(const std::vector<DkfRun>& runs) {
  if (runs.empty()) throw ValidationError("no runs to average");
  const std::size_t horizon = runs.front().steps.size();
  for (const DkfRun& r : runs) {
    if (r.steps.size() != horizon || r.truth.size() != horizon) {
      throw DimensionMismatch("runs disagree on horizon");
    }
  }
  std::vector<double> mse(horizon, 0.0);
  for (const DkfRun& r : runs) {
    for (std::size_t k = 0; k < horizon; ++k) {
      double node_avg = 0.0;
      for (const DkfNodeStep& s : r.steps[k]) {
        const Vec e = s.x_pred - r.truth[k];
        node_avg += dot(e, e);
      }
      mse[k] += node_avg / static_cast<double>(r.steps[k].size());
    }
  }
  for (double& x : mse) x /= static_cast<double>(runs.size());
  return mse;
}

}  // namespace loewner
