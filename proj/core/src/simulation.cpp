#include "loewner/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/errors.hpp"

namespace loewner {

void SolverStats::absorb(int iters, bool conv, double g) {
  ++solves;
  total_iters += iters;
  max_iters_single = std::max(max_iters_single, iters);
  if (!conv) ++nonconverged;
  max_gap = std::max(max_gap, g);
}

namespace {

OracleRound solve_oracle(const std::vector<SymMat>& inputs,
                         const SimulationOptions& opt, SolverStats& stats) {
  const CentralSolution c = solve_central(inputs, opt.kind, opt.solver);
  stats.absorb(c.iters, c.converged, c.gap);
  OracleRound o;
  o.q_star = c.q_star;
  o.lambda = c.lambda;
  o.f = c.f;
  o.eigs = eigvals_sym(c.q_star);
  return o;
}

}  // namespace

RoundHistory run_simulation(const Graph& graph,
                            const std::vector<InputTrajectory>& trajectories,
                            const SimulationOptions& opt) {
  const std::size_t n = graph.n_nodes();
  if (trajectories.size() != n) {
    throw ValidationError("run_simulation: one trajectory per node required");
  }
  if (opt.rounds < 0) {
    throw ValidationError("run_simulation: negative round count");
  }
  if (opt.theta.mode == ThetaPolicy::Mode::Fixed && !(opt.theta.theta_bar >= 1.0)) {
    throw ValidationError("run_simulation: fixed theta_bar must be >= 1");
  }

  const bool all_static =
      std::all_of(trajectories.begin(), trajectories.end(),
                  [](const InputTrajectory& t) { return is_static(t); });
  const bool check_descent = all_static &&
                             opt.theta.mode == ThetaPolicy::Mode::Fixed &&
                             opt.theta.theta_bar == 1.0;

  RoundHistory hist;
  hist.n_nodes = n;

  // Round 0: estimates are the inverses of the initial inputs.
  std::vector<NodeState> states;
  states.reserve(n);
  std::vector<SymMat> inputs(n);
  double p_floor = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inputs[i] = generate_input(trajectories[i], 0);
    const double init_theta = opt.theta.mode == ThetaPolicy::Mode::Fixed
                                  ? opt.theta.theta_bar
                                  : 1.0;
    states.push_back(init_node(static_cast<int>(i), inputs[i], init_theta));
    p_floor = (i == 0) ? states[i].p_floor
                       : std::min(p_floor, states[i].p_floor);
  }
  hist.dim = inputs.front().dim();

  Round r0;
  r0.k = 0;
  r0.p_floor_global = p_floor;
  for (std::size_t i = 0; i < n; ++i) {
    NodeRound nr;
    nr.p = inputs[i];
    nr.q = states[i].q;
    nr.f = eval_f(opt.kind, states[i].q);
    nr.eigs = eigvals_sym(states[i].q);
    nr.theta_used = states[i].theta_bar;
    r0.nodes.push_back(std::move(nr));
  }
  if (opt.oracle_every > 0) {
    r0.oracle = solve_oracle(inputs, opt, hist.stats);
  }
  hist.rounds.push_back(std::move(r0));

  for (long k = 1; k <= opt.rounds; ++k) {
    std::vector<SymMat> new_inputs(n);
    for (std::size_t i = 0; i < n; ++i) {
      new_inputs[i] = generate_input(trajectories[i], k);
    }

    std::vector<NodeState> next(n);
    Round round;
    round.k = k;
    round.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      NodeState cur = states[i];
      if (opt.theta.mode == ThetaPolicy::Mode::Adaptive) {
        cur.theta_bar = adaptive_theta(cur.p, new_inputs[i], opt.theta.kappa);
      }
      std::vector<SymMat> neighbor_qs;
      const std::vector<int>& nb = graph.closed_neighborhood(static_cast<int>(i));
      neighbor_qs.reserve(nb.size());
      for (int j : nb) neighbor_qs.push_back(states[j].q);

      LocalStepResult step =
          local_step(cur, neighbor_qs, new_inputs[i], opt.kind, opt.solver);
      hist.stats.absorb(step.iters, step.converged, step.gap);

      NodeRound& nr = round.nodes[i];
      nr.p = new_inputs[i];
      nr.q = step.state.q;
      nr.weights = step.state.weights;
      nr.f = eval_f(opt.kind, step.state.q);
      nr.eigs = eigvals_sym(step.state.q);
      nr.theta_used = cur.theta_bar;
      nr.iters = step.iters;
      nr.converged = step.converged;
      nr.gap = step.gap;

      if (check_descent) {
        const double prev_f = hist.rounds.back().nodes[i].f;
        if (nr.f > prev_f + 1e-9) {
          throw Error("run_simulation: node objective increased in a static run");
        }
      }
      next[i] = std::move(step.state);
    }

    p_floor = next.front().p_floor;
    for (std::size_t i = 1; i < n; ++i) {
      p_floor = std::min(p_floor, next[i].p_floor);
    }
    round.p_floor_global = p_floor;

    // Global eigenvalue envelope from the smallest input eigenvalue so far.
    const double bound = 1.0 / p_floor + 1e-8;
    for (std::size_t i = 0; i < n; ++i) {
      if (round.nodes[i].eigs.back() > bound) {
        throw BoundednessViolation(
            "run_simulation: node estimate exceeded the 1/p_floor envelope");
      }
    }

    if (opt.oracle_every > 0 && k % opt.oracle_every == 0) {
      round.oracle = solve_oracle(new_inputs, opt, hist.stats);
    }

    states = std::move(next);
    hist.rounds.push_back(std::move(round));
  }
  return hist;
}

ErrorMetrics eigen_error_metrics(const RoundHistory& history) {
  ErrorMetrics out;
  const std::size_t n = history.n_nodes;
  const std::size_t d = history.dim;
  for (const Round& r : history.rounds) {
    if (!r.oracle) continue;
    const OracleRound& o = *r.oracle;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double qn = r.nodes[i].eigs[j];
        out.rows.push_back(EigErrorRow{
            r.k, static_cast<int>(i), static_cast<int>(j), qn, o.eigs[j],
            std::abs(qn - o.eigs[j]), r.nodes[i].f, o.f});
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      double avg = 0.0;
      for (std::size_t i = 0; i < n; ++i) avg += r.nodes[i].eigs[j];
      avg /= static_cast<double>(n);
      out.averaged.push_back(AveragedEigRow{r.k, static_cast<int>(j), avg,
                                            o.eigs[j],
                                            std::abs(avg - o.eigs[j])});
    }
  }
  return out;
}

}  // namespace loewner
