#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "loewner/errors.hpp"
#include "loewner/graph.hpp"
#include "loewner/lowner_john.hpp"
#include "loewner/mat.hpp"
#include "loewner/psd.hpp"
#include "loewner/random_spd.hpp"
#include "loewner/rng.hpp"
#include "loewner/simulation.hpp"
#include "loewner/trajectory.hpp"

using namespace loewner;

namespace {

SymMat sym2(double a, double b, double d) {
  return SymMat(Mat(2, 2, {a, b, b, d}));
}

std::vector<SymMat> demo_infos() {
  return {sym2(4.6, -3.8, 4.2),  sym2(1.5, -0.2, 2.0), sym2(9.5, 0.4, 2.3),
          sym2(2.8, -2.2, 4.5),  sym2(11.0, 7.9, 6.7), sym2(11.5, -3.9, 3.1)};
}

Graph demo_graph() {
  return Graph(6, {{0, 1}, {0, 2}, {0, 4}, {1, 3}, {1, 4}, {1, 5}});
}

std::vector<InputTrajectory> static_demo_trajectories() {
  std::vector<InputTrajectory> out;
  for (const SymMat& info : demo_infos())
    out.push_back(StaticTrajectory{inverse_spd(info)});
  return out;
}

double frob_diff(const SymMat& a, const SymMat& b) {
  return frobenius_norm((a - b).mat());
}

}  // namespace

TEST_CASE("graph construction and neighborhoods") {
  const Graph g = demo_graph();
  CHECK(g.n_nodes() == 6);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(2, 3));
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(5) == 1);
  CHECK(g.closed_neighborhood(0) == std::vector<int>{0, 1, 2, 4});
  CHECK(g.closed_neighborhood(5) == std::vector<int>{1, 5});

  CHECK_THROWS_AS(Graph(4, {{0, 1}, {2, 3}}), DisconnectedGraph);
  CHECK_THROWS_AS(Graph(2, {{0, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph(2, {{0, 5}}), ValidationError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}}), DisconnectedGraph);
}

TEST_CASE("random_connected_graph") {
  const Graph single = random_connected_graph(1, 0.5, 11);
  CHECK(single.n_nodes() == 1);
  CHECK(single.closed_neighborhood(0) == std::vector<int>{0});

  const Graph pair = random_connected_graph(2, 1.0, 3);
  CHECK(pair.has_edge(0, 1));
  CHECK(pair.edges().size() == 1);

  const Graph a = random_connected_graph(6, 0.4, 7);
  const Graph b = random_connected_graph(6, 0.4, 7);
  CHECK(a.edges() == b.edges());
  const Graph c = random_connected_graph(6, 0.4, 8);
  // Different seeds are allowed to coincide but almost never do; this seed
  // pair was checked to differ.
  CHECK(a.edges() != c.edges());
}

TEST_CASE("generate_input: static, oscillatory, sequence") {
  const SymMat p0 = sym2(2.0, 0.5, 3.0);
  {
    const InputTrajectory t = StaticTrajectory{p0};
    CHECK(frob_diff(generate_input(t, 0), p0) == 0.0);
    CHECK(frob_diff(generate_input(t, 1000), p0) == 0.0);
    CHECK(is_static(t));
  }
  {
    OscillatoryTrajectory osc;
    osc.p0 = p0;
    osc.angle_amplitude = std::numbers::pi / 25.0;
    osc.scale_amplitude = 1.0 / 200.0;
    osc.omega = 1.5;
    const InputTrajectory t = osc;
    CHECK_FALSE(is_static(t));
    // sin(0) = 0: the base matrix comes back exactly.
    CHECK(frob_diff(generate_input(t, 0), p0) == 0.0);

    // Rotation preserves eigenvalues; breathing scales them by 1 + phi with
    // |phi| <= scale_amplitude.
    const SymMat p3 = generate_input(t, 3);
    const auto base_eigs = eigvals_sym(p0);
    const auto eigs = eigvals_sym(p3);
    for (std::size_t j = 0; j < eigs.size(); ++j) {
      const double ratio = eigs[j] / base_eigs[j];
      CHECK(ratio >= 1.0 - osc.scale_amplitude - 1e-12);
      CHECK(ratio <= 1.0 + osc.scale_amplitude + 1e-12);
    }
    // And the matrix genuinely moved.
    CHECK(frob_diff(p3, p0) > 1e-3);
  }
  {
    const InputTrajectory t =
        SequenceTrajectory{{p0, SymMat::identity(2)}};
    CHECK(frob_diff(generate_input(t, 1), SymMat::identity(2)) == 0.0);
    CHECK_THROWS_AS(generate_input(t, 2), IndexOutOfRange);
  }
}

TEST_CASE("one-node simulation pins the estimate at the input inverse") {
  const Graph g(1, {});
  const SymMat p = sym2(1.5, -0.2, 2.0);
  SimulationOptions opt;
  opt.rounds = 5;
  const RoundHistory h = run_simulation(g, {StaticTrajectory{p}}, opt);
  REQUIRE(h.rounds.size() == 6);
  const SymMat want = inverse_spd(p);
  for (const Round& r : h.rounds) {
    CHECK(frob_diff(r.nodes[0].q, want) <= 1e-14);
  }
}

TEST_CASE("static six-node demo settles onto the central optimum by k=3") {
  SimulationOptions opt;
  opt.rounds = 8;
  const RoundHistory h =
      run_simulation(demo_graph(), static_demo_trajectories(), opt);
  const ErrorMetrics m = eigen_error_metrics(h);
  REQUIRE_FALSE(m.rows.empty());
  for (const EigErrorRow& row : m.rows) {
    if (row.k >= 3) {
      CHECK(row.abs_err <= 1e-5);
    }
  }
  // Node 1's error at k=1 is strictly positive but below its k=0 error.
  double e0 = 0.0;
  double e1 = 0.0;
  for (const EigErrorRow& row : m.rows) {
    if (row.node == 0 && row.k == 0) e0 = std::max(e0, row.abs_err);
    if (row.node == 0 && row.k == 1) e1 = std::max(e1, row.abs_err);
  }
  CHECK(e1 > 0.0);
  CHECK(e1 < e0);
}

TEST_CASE("simulation is deterministic and matches a manual reconstruction") {
  SimulationOptions opt;
  opt.rounds = 4;
  const Graph g = demo_graph();
  const std::vector<InputTrajectory> trajs = static_demo_trajectories();
  const RoundHistory a = run_simulation(g, trajs, opt);
  const RoundHistory b = run_simulation(g, trajs, opt);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t k = 0; k < a.rounds.size(); ++k) {
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(frob_diff(a.rounds[k].nodes[i].q, b.rounds[k].nodes[i].q) == 0.0);
    }
  }

  // Recompute round 2, node 3 by hand from round 1's frozen estimates.
  const int node = 3;
  std::vector<SymMat> neighbor_qs;
  for (int j : g.closed_neighborhood(node))
    neighbor_qs.push_back(a.rounds[1].nodes[j].q);
  NodeState s = init_node(node, a.rounds[1].nodes[node].p, 1.0);
  s.q = a.rounds[1].nodes[node].q;
  const LocalStepResult manual = local_step(
      s, neighbor_qs, a.rounds[2].nodes[node].p, ObjectiveKind::NegLogDet);
  CHECK(frob_diff(manual.state.q, a.rounds[2].nodes[node].q) == 0.0);
}

TEST_CASE("hub networks propagate the central solution at graph speed") {
  // When one node's closed neighborhood covers the whole network, its
  // round-1 program already spans the full hull, so it lands on the
  // centralized optimum; every other node consumes that estimate in round 2
  // (the centralized point dominates anything else in their candidate sets).
  // With gap_tol 1e-12 and curvature bounded by the input eigenvalue range,
  // the eigenvalue error from round 2 on is a few 1e-6 at worst.
  Rng master(6021);
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t n_nodes = 2 + master.uniform_index(5);  // 2..6
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 1; i < n_nodes; ++i)
      edges.push_back({0, static_cast<int>(i)});
    for (std::size_t i = 1; i < n_nodes; ++i)
      for (std::size_t j = i + 1; j < n_nodes; ++j)
        if (master.bernoulli(0.3))
          edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    const Graph g(n_nodes, edges);

    std::vector<InputTrajectory> trajs;
    Rng inputs = master.fork(100 + instance);
    for (std::size_t i = 0; i < n_nodes; ++i)
      trajs.push_back(StaticTrajectory{random_spd(inputs, 2, 0.4, 3.0)});

    SimulationOptions opt;
    opt.rounds = 5;
    opt.solver.gap_tol = 1e-12;
    const RoundHistory h = run_simulation(g, trajs, opt);
    const ErrorMetrics m = eigen_error_metrics(h);
    for (const EigErrorRow& row : m.rows) {
      if (row.k >= 2) {
        CHECK(row.abs_err <= 1e-5);
      }
    }
  }
}

TEST_CASE("random static networks descend toward the central value") {
  // General topologies approach consensus asymptotically rather than in a
  // fixed number of rounds. Two guarantees are exact: no node's value ever
  // drops below the centralized optimum (every candidate set lies inside
  // the full hull), and values keep contracting toward it.
  Rng master(6021);
  for (int instance = 0; instance < 12; ++instance) {
    const std::size_t n_nodes = 2 + master.uniform_index(5);  // 2..6
    const Graph g = random_connected_graph(
        n_nodes, 0.4 + 0.4 * master.uniform(), master.next_u64());
    std::vector<InputTrajectory> trajs;
    Rng inputs = master.fork(100 + instance);
    for (std::size_t i = 0; i < n_nodes; ++i)
      trajs.push_back(StaticTrajectory{random_spd(inputs, 2, 0.4, 3.0)});

    SimulationOptions opt;
    opt.rounds = 60;
    opt.solver.gap_tol = 1e-12;
    const RoundHistory h = run_simulation(g, trajs, opt);
    REQUIRE(h.rounds.front().oracle.has_value());
    const double f_star = h.rounds.front().oracle->f;

    double first_gap = 0.0, last_gap = 0.0;
    for (const Round& r : h.rounds) {
      double worst = 0.0;
      for (const NodeRound& nr : r.nodes) {
        CHECK(nr.f >= f_star - 1e-9);
        worst = std::max(worst, nr.f - f_star);
      }
      if (r.k == 1) first_gap = worst;
      if (r.k == opt.rounds) last_gap = worst;
    }
    CHECK(last_gap <= std::max(0.5 * first_gap, 1e-8));
  }
}

TEST_CASE("monotone per-node objective descent on static runs") {
  Rng master(3111);
  for (int instance = 0; instance < 5; ++instance) {
    const std::size_t n_nodes = 3 + master.uniform_index(3);
    const Graph g =
        random_connected_graph(n_nodes, 0.5, master.next_u64());
    std::vector<InputTrajectory> trajs;
    Rng inputs = master.fork(7000 + instance);
    for (std::size_t i = 0; i < n_nodes; ++i)
      trajs.push_back(StaticTrajectory{random_spd(inputs, 2, 0.3, 2.5)});
    SimulationOptions opt;
    opt.rounds = 10;
    const RoundHistory h = run_simulation(g, trajs, opt);
    for (std::size_t k = 1; k < h.rounds.size(); ++k) {
      for (std::size_t i = 0; i < n_nodes; ++i) {
        CHECK(h.rounds[k].nodes[i].f <= h.rounds[k - 1].nodes[i].f + 1e-9);
      }
    }
  }
}

TEST_CASE("oracle cadence controls which rounds carry a central solve") {
  SimulationOptions opt;
  opt.rounds = 6;
  opt.oracle_every = 2;
  const RoundHistory h =
      run_simulation(demo_graph(), static_demo_trajectories(), opt);
  for (const Round& r : h.rounds) {
    if (r.k % 2 == 0) {
      CHECK(r.oracle.has_value());
    } else {
      CHECK_FALSE(r.oracle.has_value());
    }
  }

  SimulationOptions off;
  off.rounds = 3;
  off.oracle_every = 0;
  const RoundHistory h2 =
      run_simulation(demo_graph(), static_demo_trajectories(), off);
  for (const Round& r : h2.rounds) CHECK_FALSE(r.oracle.has_value());
  const ErrorMetrics m = eigen_error_metrics(h2);
  CHECK(m.rows.empty());
}

TEST_CASE("eigen_error_metrics closed forms") {
  // Build a two-round history by hand: all nodes at the oracle, then one
  // node at twice the oracle.
  const SymMat q_star = sym2(2.0, 0.4, 1.0);
  const auto star_eigs = eigvals_sym(q_star);

  RoundHistory h;
  h.n_nodes = 2;
  h.dim = 2;
  for (long k = 0; k < 2; ++k) {
    Round r;
    r.k = k;
    for (int i = 0; i < 2; ++i) {
      NodeRound nr;
      nr.p = SymMat::identity(2);
      nr.q = (k == 1 && i == 1) ? 2.0 * q_star : q_star;
      nr.eigs = eigvals_sym(nr.q);
      r.nodes.push_back(nr);
    }
    OracleRound oracle;
    oracle.q_star = q_star;
    oracle.eigs = star_eigs;
    r.oracle = oracle;
    h.rounds.push_back(r);
  }

  const ErrorMetrics m = eigen_error_metrics(h);
  for (const EigErrorRow& row : m.rows) {
    if (row.k == 0 || row.node == 0) {
      CHECK(row.abs_err == doctest::Approx(0.0));
    } else {
      // Doubling the matrix doubles each eigenvalue, so the error equals
      // the oracle eigenvalue itself.
      CHECK(row.abs_err ==
            doctest::Approx(star_eigs[static_cast<std::size_t>(
                row.eig_index)]));
    }
  }
  // Averaged variant: half the per-node error at k=1.
  for (const AveragedEigRow& row : m.averaged) {
    if (row.k == 1) {
      CHECK(row.abs_err ==
            doctest::Approx(0.5 * star_eigs[static_cast<std::size_t>(
                row.eig_index)]));
    }
  }
}

TEST_CASE("dynamic run keeps the estimate envelope bounded") {
  Rng rng(2210);
  std::vector<InputTrajectory> trajs;
  const Graph g(3, {{0, 1}, {1, 2}});
  for (int i = 0; i < 3; ++i) {
    OscillatoryTrajectory osc;
    osc.p0 = random_spd(rng, 2, 0.9, 1.1);
    osc.angle_amplitude = std::numbers::pi / 25.0;
    osc.scale_amplitude = 1.0 / 200.0;
    osc.omega = 1.0 + rng.uniform();
    trajs.push_back(osc);
  }
  SimulationOptions opt;
  opt.rounds = 80;
  opt.theta.mode = ThetaPolicy::Mode::Fixed;
  opt.theta.theta_bar = 1.0 / 0.98;
  opt.oracle_every = 0;
  const RoundHistory h = run_simulation(g, trajs, opt);

  double p_floor = std::numeric_limits<double>::infinity();
  for (const Round& r : h.rounds) {
    for (const NodeRound& nr : r.nodes) {
      p_floor = std::min(p_floor, min_eigval(nr.p));
    }
    for (const NodeRound& nr : r.nodes) {
      CHECK(max_eigval(nr.q) <= 1.0 / p_floor + 1e-8);
    }
    CHECK(r.p_floor_global == doctest::Approx(p_floor));
  }
}
