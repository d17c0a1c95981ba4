#include "loewner/experiment_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <utility>

#include <json.hpp>

#include "loewner/dkf.hpp"
#include "loewner/errors.hpp"
#include "loewner/graph.hpp"
#include "loewner/lowner_john.hpp"
#include "loewner/psd.hpp"
#include "loewner/random_spd.hpp"
#include "loewner/rng.hpp"
#include "loewner/trajectory.hpp"

namespace loewner {

namespace {

constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ULL;

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream ofs(path, std::ios::binary);  // fixed newlines on any host
  if (!ofs) throw IoError("cannot open for writing: " + path.string());
  return ofs;
}

Graph build_graph(const GraphSpec& spec, std::uint64_t seed) {
  if (spec.random) {
    return random_connected_graph(spec.random->nodes, spec.random->edge_prob,
                                  splitmix64(seed ^ 0x67b176ce5a8d93f1ULL));
  }
  std::vector<std::pair<int, int>> zero_based;
  zero_based.reserve(spec.edges.size());
  for (const auto& [a, b] : spec.edges) zero_based.emplace_back(a - 1, b - 1);
  return Graph(spec.nodes, zero_based);
}

// Steady-band statistics over an error series sampled at (round, value)
// pairs: the band is 1.05x the maximum over the last quarter of the samples,
// floored at 1e-5 so runs whose tail sits at solver precision settle at the
// reporting tolerance instead of chasing roundoff; K is the first sampled
// round from which every later sample stays inside the band; delta is the
// maximum over [K+50, K+500] clipped to the series (falling back to [K, end]
// if that window is empty).
struct BandStats {
  long k = -1;
  double delta = 0.0;
};

BandStats steady_band(const std::vector<std::pair<long, double>>& series) {
  BandStats out;
  if (series.empty()) return out;
  const std::size_t tail_start = series.size() - 1 - (series.size() - 1) / 4;
  double band = 0.0;
  for (std::size_t i = tail_start; i < series.size(); ++i) {
    band = std::max(band, series[i].second);
  }
  const double threshold = std::max(1.05 * band, 1e-5);

  std::size_t settle = series.size();
  for (std::size_t i = series.size(); i-- > 0;) {
    if (series[i].second > threshold) break;
    settle = i;
  }
  if (settle == series.size()) return out;  // never settles
  out.k = series[settle].first;

  const long lo = out.k + 50;
  const long hi = out.k + 500;
  bool windowed = false;
  for (const auto& [k, err] : series) {
    if (k >= lo && k <= hi) {
      out.delta = windowed ? std::max(out.delta, err) : err;
      windowed = true;
    }
  }
  if (!windowed) {
    for (const auto& [k, err] : series) {
      if (k >= out.k) out.delta = std::max(out.delta, err);
    }
  }
  return out;
}

void merge_stats(SolverStats& into, const SolverStats& from) {
  into.solves += from.solves;
  into.total_iters += from.total_iters;
  into.max_iters_single = std::max(into.max_iters_single, from.max_iters_single);
  into.nonconverged += from.nonconverged;
  into.max_gap = std::max(into.max_gap, from.max_gap);
}

struct ConsensusArtifacts {
  ErrorMetrics metrics;
  SolverStats stats;
  BandStats band;
};

ConsensusArtifacts run_consensus(const ExperimentConfig& cfg,
                                 std::uint64_t seed, long oracle_every) {
  const Graph graph = build_graph(cfg.graph, seed);
  const Rng root(seed);

  std::vector<InputTrajectory> trajectories;
  trajectories.reserve(cfg.trajectories.size());
  for (std::size_t i = 0; i < cfg.trajectories.size(); ++i) {
    const TrajectorySpec& t = cfg.trajectories[i];
    if (t.kind == TrajectorySpec::Kind::Static) {
      trajectories.push_back(StaticTrajectory{t.base_covariance()});
    } else {
      OscillatoryTrajectory osc;
      osc.p0 = t.base_covariance();
      osc.angle_amplitude = t.angle_amplitude;
      osc.scale_amplitude = t.scale_amplitude;
      if (t.omega) {
        osc.omega = *t.omega;
      } else {
        const std::array<double, 2> range =
            cfg.omega_range.value_or(std::array<double, 2>{1.0, 2.0});
        Rng omega_rng = root.fork(2000 + static_cast<std::uint64_t>(i));
        osc.omega = omega_rng.uniform(range[0], range[1]);
      }
      trajectories.push_back(osc);
    }
  }

  SimulationOptions opt;
  opt.rounds = cfg.rounds;
  opt.kind = cfg.objective;
  opt.theta.mode = cfg.theta.adaptive ? ThetaPolicy::Mode::Adaptive
                                      : ThetaPolicy::Mode::Fixed;
  opt.theta.theta_bar = cfg.theta.theta_bar;
  opt.theta.kappa = cfg.theta.kappa;
  opt.solver = cfg.solver;
  opt.oracle_every = oracle_every;

  ConsensusArtifacts out;
  RoundHistory history = run_simulation(graph, trajectories, opt);
  out.stats = history.stats;
  out.metrics = eigen_error_metrics(history);

  std::map<long, double> worst;  // per round, across eigenvalue indices
  for (const AveragedEigRow& row : out.metrics.averaged) {
    auto [it, inserted] = worst.try_emplace(row.k, row.abs_err);
    if (!inserted) it->second = std::max(it->second, row.abs_err);
  }
  std::vector<std::pair<long, double>> series(worst.begin(), worst.end());
  out.band = steady_band(series);
  return out;
}

struct DkfArtifacts {
  std::vector<double> centralized;
  std::vector<double> proposed;
  std::vector<double> cdkf;
  SolverStats stats;
  long clamp_count = 0;
  BandStats band;
};

Mat default_dynamics(std::size_t n) {
  // Mildly contracting with a slow in-plane rotation on each adjacent pair:
  // stable for any n, and not a multiple of the identity.
  Mat a(n, n);
  const double c = 0.99 * std::cos(0.05);
  const double s = 0.99 * std::sin(0.05);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 0.99;
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    a(i, i) = c;
    a(i + 1, i + 1) = c;
    a(i, i + 1) = s;
    a(i + 1, i) = -s;
  }
  return a;
}

DkfArtifacts run_dkf_experiment(const ExperimentConfig& cfg,
                                std::uint64_t seed) {
  const Graph graph = build_graph(cfg.graph, seed);
  const std::size_t n_nodes = graph.n_nodes();
  const std::size_t dim = cfg.dkf.state_dim;
  const Rng root(seed);

  LinearSystem sys;
  sys.a = cfg.dkf.dynamics ? *cfg.dkf.dynamics : default_dynamics(dim);
  sys.w = SymMat::scaled_identity(dim, cfg.dkf.process_noise);
  sys.h.reserve(n_nodes);
  sys.v.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    Rng noise_rng = root.fork(3000 + static_cast<std::uint64_t>(i));
    const double mu = noise_rng.uniform(cfg.dkf.meas_noise_range[0],
                                        cfg.dkf.meas_noise_range[1]);
    sys.h.push_back(Mat::identity(dim));
    sys.v.push_back(SymMat::scaled_identity(dim, mu));
  }

  std::vector<std::uint64_t> run_seeds;
  run_seeds.reserve(static_cast<std::size_t>(cfg.dkf.runs));
  for (int r = 0; r < cfg.dkf.runs; ++r) {
    run_seeds.push_back(
        splitmix64(seed + kSeedStride * static_cast<std::uint64_t>(r)));
  }

  DkfOptions opt;
  opt.kind = cfg.objective;
  opt.theta.mode = cfg.theta.adaptive ? ThetaPolicy::Mode::Adaptive
                                      : ThetaPolicy::Mode::Fixed;
  opt.theta.theta_bar = cfg.theta.theta_bar;
  opt.theta.kappa = cfg.theta.kappa;
  opt.solver = cfg.solver;
  opt.fusion.inner_rounds = cfg.dkf.inner_rounds;
  opt.local_steps_per_filter_step = cfg.dkf.local_steps;

  DkfArtifacts out;
  const std::vector<DkfRun> proposed =
      run_dkf_proposed(sys, graph, cfg.horizon, run_seeds, opt);
  const std::vector<DkfRun> cdkf = run_cdkf_baseline(
      sys, graph, cfg.horizon, run_seeds, CdkfOptions{cfg.dkf.cdkf_c});
  const std::vector<DkfRun> central =
      run_centralized_kf(sys, cfg.horizon, run_seeds);

  for (const DkfRun& r : proposed) {
    merge_stats(out.stats, r.solver);
    out.clamp_count += r.denominator_underflows;
  }
  out.proposed = mse_metric(proposed);
  out.cdkf = mse_metric(cdkf);
  out.centralized = mse_metric(central);

  std::vector<std::pair<long, double>> series;
  series.reserve(out.proposed.size());
  for (std::size_t k = 0; k < out.proposed.size(); ++k) {
    series.emplace_back(static_cast<long>(k), out.proposed[k]);
  }
  out.band = steady_band(series);
  return out;
}

struct OracleArtifacts {
  struct Row {
    int instance;
    int nodes;
    int dim;
    double f_solver;
    double f_oracle;
    double abs_dev;
  };
  std::vector<Row> rows;
  SolverStats stats;
  double max_dev = 0.0;
};

OracleArtifacts run_oracle_check(const ExperimentConfig& cfg,
                                 std::uint64_t seed) {
  OracleArtifacts out;
  for (int inst = 0; inst < cfg.oracle.instances; ++inst) {
    Rng rng(splitmix64(seed + kSeedStride * static_cast<std::uint64_t>(inst)));
    const int n_nodes =
        cfg.oracle.nodes_range[0] +
        static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(
            cfg.oracle.nodes_range[1] - cfg.oracle.nodes_range[0] + 1)));
    const int dim =
        cfg.oracle.dim_range[0] +
        static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(
            cfg.oracle.dim_range[1] - cfg.oracle.dim_range[0] + 1)));

    std::vector<SymMat> p_list;
    p_list.reserve(static_cast<std::size_t>(n_nodes));
    for (int j = 0; j < n_nodes; ++j) {
      p_list.push_back(
          random_spd(rng, static_cast<std::size_t>(dim), 0.5, 3.0));
    }

    const CentralSolution sol =
        solve_central(p_list, cfg.objective, cfg.solver);
    out.stats.absorb(sol.iters, sol.converged, sol.gap);

    std::vector<SymMat> inverses;
    inverses.reserve(p_list.size());
    for (const SymMat& p : p_list) inverses.push_back(inverse_spd(p));
    const BruteForceResult bf = brute_force_simplex(
        cfg.objective, AtomSet(inverses), cfg.oracle.grid_step);

    const double dev = std::abs(sol.f - bf.f);
    out.max_dev = std::max(out.max_dev, dev);
    out.rows.push_back({inst, n_nodes, dim, sol.f, bf.f, dev});
  }
  return out;
}

void write_oracle_csv(const OracleArtifacts& art,
                      const std::filesystem::path& path) {
  std::ofstream ofs = open_out(path);
  ofs << "instance,nodes,dim,f_solver,f_oracle,abs_dev\n";
  for (const auto& r : art.rows) {
    ofs << r.instance << ',' << r.nodes << ',' << r.dim << ','
        << fmt_real(r.f_solver) << ',' << fmt_real(r.f_oracle) << ','
        << fmt_real(r.abs_dev) << '\n';
  }
  if (!ofs) throw IoError("failed writing " + path.string());
}

}  // namespace

void write_consensus_csv(const ErrorMetrics& metrics,
                         const std::filesystem::path& path) {
  bool any = false;
  for (const EigErrorRow& row : metrics.rows) {
    if (row.k >= 1) {
      any = true;
      break;
    }
  }
  if (!any) throw ValidationError("no rounds to write");
  std::ofstream ofs = open_out(path);
  ofs << "k,node,eig_index,q_node,q_star,abs_err,f_node,f_star\n";
  for (const EigErrorRow& row : metrics.rows) {
    if (row.k < 1) continue;  // initialization is not an algorithm round
    ofs << row.k << ',' << row.node + 1 << ',' << row.eig_index + 1 << ','
        << fmt_real(row.q_node) << ',' << fmt_real(row.q_star) << ','
        << fmt_real(row.abs_err) << ',' << fmt_real(row.f_node) << ','
        << fmt_real(row.f_star) << '\n';
  }
  if (!ofs) throw IoError("failed writing " + path.string());
}

void write_dkf_csv(const std::vector<double>& centralized,
                   const std::vector<double>& proposed,
                   const std::vector<double>& cdkf,
                   const std::filesystem::path& path) {
  if (centralized.empty() || centralized.size() != proposed.size() ||
      proposed.size() != cdkf.size()) {
    throw ValidationError("filter curves must be non-empty and aligned");
  }
  std::ofstream ofs = open_out(path);
  ofs << "k,filter,mse\n";
  for (std::size_t k = 0; k < centralized.size(); ++k) {
    ofs << k << ",centralized," << fmt_real(centralized[k]) << '\n';
    ofs << k << ",proposed," << fmt_real(proposed[k]) << '\n';
    ofs << k << ",cdkf," << fmt_real(cdkf[k]) << '\n';
  }
  if (!ofs) throw IoError("failed writing " + path.string());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RunOverrides& ov) {
  if (ov.oracle_every < 0) {
    throw ValidationError("oracle_every must be nonnegative");
  }
  const bool consensus =
      cfg.experiment == "static" || cfg.experiment == "dynamic";
  if (consensus && ov.oracle_every == 0) {
    // K and delta need the centralized reference; forbid silently empty
    // metrics instead of writing a CSV with no rows.
    throw ValidationError("consensus experiments need oracle_every >= 1");
  }

  ExperimentResult res;
  res.experiment = cfg.experiment;
  res.seed = ov.seed.value_or(cfg.seed);
  const std::filesystem::path out_dir(ov.out.value_or(cfg.out));
  res.csv_path = out_dir / "metrics.csv";
  res.summary_path = out_dir / "summary.json";

  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::filesystem::create_directories(out_dir);

    if (consensus) {
      ConsensusArtifacts art = run_consensus(cfg, res.seed, ov.oracle_every);
      res.stats = art.stats;
      res.k_measured = art.band.k;
      res.delta_measured = art.band.delta;
      write_consensus_csv(art.metrics, res.csv_path);
    } else if (cfg.experiment == "dkf") {
      DkfArtifacts art = run_dkf_experiment(cfg, res.seed);
      res.stats = art.stats;
      res.clamp_count = art.clamp_count;
      res.k_measured = art.band.k;
      res.delta_measured = art.band.delta;
      write_dkf_csv(art.centralized, art.proposed, art.cdkf, res.csv_path);
    } else if (cfg.experiment == "oracle-check") {
      OracleArtifacts art = run_oracle_check(cfg, res.seed);
      res.stats = art.stats;
      res.k_measured = 0;
      res.delta_measured = art.max_dev;
      write_oracle_csv(art, res.csv_path);
    } else {
      throw ValidationError("unknown experiment '" + cfg.experiment + "'");
    }

    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    nlohmann::json summary;
    summary["experiment"] = res.experiment;
    summary["seed"] = res.seed;
    summary["K_measured"] = res.k_measured;
    summary["delta_measured"] = res.delta_measured;
    summary["solver_stats"] = {{"solves", res.stats.solves},
                               {"total_iters", res.stats.total_iters},
                               {"max_iters_single", res.stats.max_iters_single},
                               {"nonconverged", res.stats.nonconverged},
                               {"max_gap", res.stats.max_gap}};
    summary["clamp_count"] = res.clamp_count;
    summary["wall_time_s"] = res.wall_time_s;
    std::ofstream ofs = open_out(res.summary_path);
    ofs << summary.dump(2) << '\n';
    if (!ofs) throw IoError("failed writing " + res.summary_path.string());
  } catch (const Error& e) {
    throw RuntimeFailure(cfg.experiment + " experiment failed: " + e.what());
  }
  return res;
}

}  // namespace loewner
