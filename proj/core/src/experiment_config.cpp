#include "loewner/experiment_config.hpp"

#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "loewner/errors.hpp"
#include "loewner/graph.hpp"
#include "loewner/psd.hpp"

namespace loewner {

namespace {

using nlohmann::json;

[[noreturn]] void fail_parse(const std::string& path, const std::string& why) {
  throw ParseError(path + ": " + why);
}

[[noreturn]] void fail_valid(const std::string& path, const std::string& why) {
  throw ValidationError(path + ": " + why);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& path) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      fail_parse(path.empty() ? item.key() : path + "." + item.key(),
                 "unknown field");
    }
  }
}

const json& field(const json& obj, const std::string& key,
                  const std::string& path) {
  if (!obj.contains(key)) fail_parse(path + key, "missing required field");
  return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail_parse(path, "expected a number");
  return v.get<double>();
}

long as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail_parse(path, "expected an integer");
  return v.get<long>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail_parse(path, "expected a string");
  return v.get<std::string>();
}

Mat parse_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail_parse(path, "expected a matrix");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  std::vector<double> data;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = v.at(i);
    if (!row.is_array() || row.empty()) {
      fail_parse(path + "[" + std::to_string(i) + "]", "expected a row");
    }
    if (i == 0) {
      cols = row.size();
      data.reserve(rows * cols);
    } else if (row.size() != cols) {
      fail_parse(path + "[" + std::to_string(i) + "]", "ragged row length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      data.push_back(as_number(
          row.at(j),
          path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    }
  }
  return Mat(rows, cols, std::move(data));
}

SymMat parse_spd(const json& v, const std::string& path) {
  const Mat m = parse_matrix(v, path);
  if (m.rows() != m.cols()) fail_valid(path, "matrix must be square");
  SymMat s;
  try {
    s = SymMat(m);
  } catch (const NotSymmetric&) {
    fail_valid(path, "matrix is not symmetric");
  }
  try {
    if (min_eigval(s) <= 0.0) fail_valid(path, "matrix is not positive definite");
  } catch (const Error&) {
    fail_valid(path, "matrix is not positive definite");
  }
  return s;
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

GraphSpec parse_graph(const json& v, const std::string& path) {
  if (!v.is_object()) fail_parse(path, "expected an object");
  GraphSpec g;
  if (v.contains("random")) {
    check_keys(v, {"random"}, path);
    const json& r = v.at("random");
    check_keys(r, {"nodes", "edge_prob"}, path + ".random");
    RandomGraphSpec rg;
    rg.nodes = static_cast<std::size_t>(
        as_integer(field(r, "nodes", path + ".random."), path + ".random.nodes"));
    rg.edge_prob = as_number(field(r, "edge_prob", path + ".random."),
                             path + ".random.edge_prob");
    if (rg.nodes < 1) fail_valid(path + ".random.nodes", "need at least one node");
    if (rg.edge_prob <= 0.0 || rg.edge_prob > 1.0) {
      fail_valid(path + ".random.edge_prob", "must be in (0, 1]");
    }
    g.random = rg;
    g.nodes = rg.nodes;
    return g;
  }
  check_keys(v, {"nodes", "edges"}, path);
  g.nodes = static_cast<std::size_t>(
      as_integer(field(v, "nodes", path + "."), path + ".nodes"));
  if (g.nodes < 1) fail_valid(path + ".nodes", "need at least one node");
  const json& edges = field(v, "edges", path + ".");
  if (!edges.is_array()) fail_parse(path + ".edges", "expected an array");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string epath = path + ".edges[" + std::to_string(e) + "]";
    const json& pair = edges.at(e);
    if (!pair.is_array() || pair.size() != 2) {
      fail_parse(epath, "expected a two-element pair");
    }
    const long a = as_integer(pair.at(0), epath + "[0]");
    const long b = as_integer(pair.at(1), epath + "[1]");
    if (a < 1 || b < 1 || a > static_cast<long>(g.nodes) ||
        b > static_cast<long>(g.nodes)) {
      fail_valid(epath, "node ids are 1-based and must be within the graph");
    }
    if (a == b) fail_valid(epath, "self loops are not allowed");
    g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return g;
}

TrajectorySpec parse_trajectory(const json& v, const std::string& path) {
  if (!v.is_object()) fail_parse(path, "expected an object");
  TrajectorySpec t;
  const std::string type = as_string(field(v, "type", path + "."), path + ".type");
  if (type == "static") {
    t.kind = TrajectorySpec::Kind::Static;
    check_keys(v, {"type", "p", "p_inv"}, path);
  } else if (type == "oscillatory") {
    t.kind = TrajectorySpec::Kind::Oscillatory;
    check_keys(v,
               {"type", "p", "p_inv", "angle_amplitude", "scale_amplitude",
                "omega"},
               path);
  } else {
    fail_valid(path + ".type", "unknown trajectory type '" + type + "'");
  }

  const bool has_p = v.contains("p");
  const bool has_pinv = v.contains("p_inv");
  if (has_p == has_pinv) {
    fail_valid(path, "exactly one of 'p' and 'p_inv' is required");
  }
  t.given_as_inverse = has_pinv;
  t.matrix = parse_spd(v.at(has_pinv ? "p_inv" : "p"),
                       path + (has_pinv ? ".p_inv" : ".p"));

  if (t.kind == TrajectorySpec::Kind::Oscillatory) {
    t.angle_amplitude = as_number(field(v, "angle_amplitude", path + "."),
                                  path + ".angle_amplitude");
    t.scale_amplitude = as_number(field(v, "scale_amplitude", path + "."),
                                  path + ".scale_amplitude");
    if (std::abs(t.scale_amplitude) >= 1.0) {
      fail_valid(path + ".scale_amplitude", "must have magnitude below 1");
    }
    if (v.contains("omega")) {
      t.omega = as_number(v.at("omega"), path + ".omega");
      if (*t.omega <= 0.0) fail_valid(path + ".omega", "must be positive");
    }
  }
  return t;
}

ThetaSpec parse_theta(const json& v, const std::string& path) {
  ThetaSpec t;
  if (v.is_number()) {
    t.adaptive = false;
    t.theta_bar = v.get<double>();
    if (t.theta_bar < 1.0) fail_valid(path, "theta_bar must be at least 1");
    return t;
  }
  if (v.is_object() && v.contains("adaptive")) {
    check_keys(v, {"adaptive"}, path);
    const json& a = v.at("adaptive");
    check_keys(a, {"kappa"}, path + ".adaptive");
    t.adaptive = true;
    t.kappa = as_number(field(a, "kappa", path + ".adaptive."),
                        path + ".adaptive.kappa");
    if (t.kappa <= 0.0) fail_valid(path + ".adaptive.kappa", "must be positive");
    return t;
  }
  fail_parse(path, "expected a number or {\"adaptive\": {\"kappa\": ...}}");
}

SolverConfig parse_solver(const json& v, const std::string& path) {
  check_keys(v, {"max_iters", "gap_tol", "line_search_shrink"}, path);
  SolverConfig s;
  if (v.contains("max_iters")) {
    s.max_iters =
        static_cast<int>(as_integer(v.at("max_iters"), path + ".max_iters"));
  }
  if (v.contains("gap_tol")) {
    s.gap_tol = as_number(v.at("gap_tol"), path + ".gap_tol");
  }
  if (v.contains("line_search_shrink")) {
    s.line_search_shrink =
        as_number(v.at("line_search_shrink"), path + ".line_search_shrink");
  }
  if (s.max_iters < 1) fail_valid(path + ".max_iters", "must be positive");
  if (s.gap_tol <= 0.0) fail_valid(path + ".gap_tol", "must be positive");
  if (s.line_search_shrink <= 0.0 || s.line_search_shrink >= 1.0) {
    fail_valid(path + ".line_search_shrink", "must be in (0, 1)");
  }
  return s;
}

DkfSpec parse_dkf(const json& v, const std::string& path) {
  check_keys(v,
             {"runs", "state_dim", "dynamics", "process_noise",
              "meas_noise_range", "cdkf_c", "inner_rounds", "local_steps"},
             path);
  DkfSpec d;
  if (v.contains("runs")) {
    d.runs = static_cast<int>(as_integer(v.at("runs"), path + ".runs"));
  }
  if (v.contains("state_dim")) {
    d.state_dim = static_cast<std::size_t>(
        as_integer(v.at("state_dim"), path + ".state_dim"));
  }
  if (v.contains("dynamics")) {
    d.dynamics = parse_matrix(v.at("dynamics"), path + ".dynamics");
    if (d.dynamics->rows() != d.dynamics->cols() ||
        d.dynamics->rows() != d.state_dim) {
      fail_valid(path + ".dynamics", "must be state_dim x state_dim");
    }
  }
  if (v.contains("process_noise")) {
    d.process_noise = as_number(v.at("process_noise"), path + ".process_noise");
  }
  if (v.contains("meas_noise_range")) {
    const json& r = v.at("meas_noise_range");
    if (!r.is_array() || r.size() != 2) {
      fail_parse(path + ".meas_noise_range", "expected [lo, hi]");
    }
    d.meas_noise_range = {as_number(r.at(0), path + ".meas_noise_range[0]"),
                          as_number(r.at(1), path + ".meas_noise_range[1]")};
  }
  if (v.contains("cdkf_c")) {
    d.cdkf_c = as_number(v.at("cdkf_c"), path + ".cdkf_c");
  }
  if (v.contains("inner_rounds")) {
    d.inner_rounds = as_integer(v.at("inner_rounds"), path + ".inner_rounds");
  }
  if (v.contains("local_steps")) {
    d.local_steps =
        static_cast<int>(as_integer(v.at("local_steps"), path + ".local_steps"));
  }
  if (d.runs < 1) fail_valid(path + ".runs", "must be positive");
  if (d.state_dim < 1) fail_valid(path + ".state_dim", "must be positive");
  if (d.process_noise < 0.0) {
    fail_valid(path + ".process_noise", "must be nonnegative");
  }
  if (d.meas_noise_range[0] <= 0.0 ||
      d.meas_noise_range[1] < d.meas_noise_range[0]) {
    fail_valid(path + ".meas_noise_range", "need 0 < lo <= hi");
  }
  if (d.cdkf_c < 0.0) fail_valid(path + ".cdkf_c", "must be nonnegative");
  if (d.inner_rounds < 1) fail_valid(path + ".inner_rounds", "must be positive");
  if (d.local_steps < 1) fail_valid(path + ".local_steps", "must be positive");
  return d;
}

OracleCheckSpec parse_oracle(const json& v, const std::string& path) {
  check_keys(v, {"instances", "nodes_range", "dim_range", "grid_step"}, path);
  OracleCheckSpec o;
  if (v.contains("instances")) {
    o.instances =
        static_cast<int>(as_integer(v.at("instances"), path + ".instances"));
  }
  auto range = [&](const char* key, std::array<int, 2>& out) {
    if (!v.contains(key)) return;
    const std::string rpath = path + "." + key;
    const json& r = v.at(key);
    if (!r.is_array() || r.size() != 2) fail_parse(rpath, "expected [lo, hi]");
    out = {static_cast<int>(as_integer(r.at(0), rpath + "[0]")),
           static_cast<int>(as_integer(r.at(1), rpath + "[1]"))};
    if (out[0] < 1 || out[1] < out[0]) fail_valid(rpath, "need 1 <= lo <= hi");
  };
  range("nodes_range", o.nodes_range);
  range("dim_range", o.dim_range);
  if (v.contains("grid_step")) {
    o.grid_step = as_number(v.at("grid_step"), path + ".grid_step");
  }
  if (o.instances < 1) fail_valid(path + ".instances", "must be positive");
  if (o.grid_step <= 0.0 || o.grid_step > 1.0) {
    fail_valid(path + ".grid_step", "must be in (0, 1]");
  }
  return o;
}

}  // namespace

SymMat TrajectorySpec::base_covariance() const {
  return given_as_inverse ? inverse_spd(matrix) : matrix;
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config root must be an object");
  check_keys(root,
             {"experiment", "graph", "trajectories", "omega_range", "theta_bar",
              "objective", "rounds", "horizon", "seed", "solver", "out", "dkf",
              "oracle_check"},
             "");

  ExperimentConfig cfg;
  cfg.experiment = as_string(field(root, "experiment", ""), "experiment");
  const bool consensus =
      cfg.experiment == "static" || cfg.experiment == "dynamic";
  if (!consensus && cfg.experiment != "dkf" &&
      cfg.experiment != "oracle-check") {
    fail_valid("experiment", "unknown experiment '" + cfg.experiment + "'");
  }

  if (!root.contains("seed")) fail_parse("seed", "missing required field");
  if (!root.at("seed").is_number_unsigned() &&
      !root.at("seed").is_number_integer()) {
    fail_parse("seed", "expected an integer");
  }
  if (root.at("seed").is_number_integer() &&
      root.at("seed").get<long long>() < 0) {
    fail_valid("seed", "must be nonnegative");
  }
  cfg.seed = root.at("seed").get<std::uint64_t>();

  if (root.contains("out")) cfg.out = as_string(root.at("out"), "out");
  if (root.contains("solver")) {
    cfg.solver = parse_solver(root.at("solver"), "solver");
  }
  if (root.contains("theta_bar")) {
    cfg.theta = parse_theta(root.at("theta_bar"), "theta_bar");
  }
  if (root.contains("objective")) {
    const std::string o = as_string(root.at("objective"), "objective");
    if (o == "NegLogDet") {
      cfg.objective = ObjectiveKind::NegLogDet;
    } else if (o == "TraceInverse") {
      cfg.objective = ObjectiveKind::TraceInverse;
    } else {
      fail_valid("objective", "unknown objective '" + o + "'");
    }
  }
  if (root.contains("omega_range")) {
    const json& r = root.at("omega_range");
    if (!r.is_array() || r.size() != 2) {
      fail_parse("omega_range", "expected [lo, hi]");
    }
    cfg.omega_range = {as_number(r.at(0), "omega_range[0]"),
                       as_number(r.at(1), "omega_range[1]")};
    if ((*cfg.omega_range)[0] <= 0.0 ||
        (*cfg.omega_range)[1] < (*cfg.omega_range)[0]) {
      fail_valid("omega_range", "need 0 < lo <= hi");
    }
  }

  if (consensus || cfg.experiment == "dkf") {
    cfg.graph = parse_graph(field(root, "graph", ""), "graph");
    if (!cfg.graph.random) {
      std::vector<std::pair<int, int>> zero_based;
      zero_based.reserve(cfg.graph.edges.size());
      for (const auto& [a, b] : cfg.graph.edges) {
        zero_based.emplace_back(a - 1, b - 1);
      }
      try {
        Graph probe(cfg.graph.nodes, zero_based);
      } catch (const Error& e) {
        fail_valid("graph", e.what());
      }
    }
  }

  if (consensus) {
    if (!root.contains("rounds")) fail_parse("rounds", "missing required field");
    cfg.rounds = as_integer(root.at("rounds"), "rounds");
    if (cfg.rounds < 1) fail_valid("rounds", "must be positive");
    const json& trajs = field(root, "trajectories", "");
    if (!trajs.is_array() || trajs.empty()) {
      fail_parse("trajectories", "expected a non-empty array");
    }
    if (trajs.size() != cfg.graph.nodes) {
      fail_valid("trajectories", "need exactly one trajectory per node");
    }
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      cfg.trajectories.push_back(parse_trajectory(
          trajs.at(i), "trajectories[" + std::to_string(i) + "]"));
    }
    const bool wants_oscillatory = cfg.experiment == "dynamic";
    for (std::size_t i = 0; i < cfg.trajectories.size(); ++i) {
      const bool osc =
          cfg.trajectories[i].kind == TrajectorySpec::Kind::Oscillatory;
      if (osc != wants_oscillatory) {
        fail_valid("trajectories[" + std::to_string(i) + "].type",
                   wants_oscillatory ? "dynamic experiments need oscillatory "
                                       "trajectories"
                                     : "static experiments need static "
                                       "trajectories");
      }
    }
  }

  if (cfg.experiment == "dkf") {
    if (!root.contains("horizon")) {
      fail_parse("horizon", "missing required field");
    }
    cfg.horizon = as_integer(root.at("horizon"), "horizon");
    if (cfg.horizon < 1) fail_valid("horizon", "must be positive");
    if (root.contains("dkf")) cfg.dkf = parse_dkf(root.at("dkf"), "dkf");
  }

  if (cfg.experiment == "oracle-check" && root.contains("oracle_check")) {
    cfg.oracle = parse_oracle(root.at("oracle_check"), "oracle_check");
  }

  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json root;
  root["experiment"] = cfg.experiment;
  root["seed"] = cfg.seed;
  root["out"] = cfg.out;
  root["objective"] = cfg.objective == ObjectiveKind::NegLogDet
                          ? "NegLogDet"
                          : "TraceInverse";
  if (cfg.theta.adaptive) {
    root["theta_bar"] = {{"adaptive", {{"kappa", cfg.theta.kappa}}}};
  } else {
    root["theta_bar"] = cfg.theta.theta_bar;
  }
  root["solver"] = {{"max_iters", cfg.solver.max_iters},
                    {"gap_tol", cfg.solver.gap_tol},
                    {"line_search_shrink", cfg.solver.line_search_shrink}};
  if (cfg.omega_range) {
    root["omega_range"] = {(*cfg.omega_range)[0], (*cfg.omega_range)[1]};
  }

  const bool consensus =
      cfg.experiment == "static" || cfg.experiment == "dynamic";
  if (consensus || cfg.experiment == "dkf") {
    json g;
    if (cfg.graph.random) {
      g["random"] = {{"nodes", cfg.graph.random->nodes},
                     {"edge_prob", cfg.graph.random->edge_prob}};
    } else {
      g["nodes"] = cfg.graph.nodes;
      json edges = json::array();
      for (const auto& [a, b] : cfg.graph.edges) edges.push_back({a, b});
      g["edges"] = std::move(edges);
    }
    root["graph"] = std::move(g);
  }

  if (consensus) {
    root["rounds"] = cfg.rounds;
    json trajs = json::array();
    for (const TrajectorySpec& t : cfg.trajectories) {
      json tj;
      tj["type"] =
          t.kind == TrajectorySpec::Kind::Static ? "static" : "oscillatory";
      tj[t.given_as_inverse ? "p_inv" : "p"] = matrix_to_json(t.matrix.mat());
      if (t.kind == TrajectorySpec::Kind::Oscillatory) {
        tj["angle_amplitude"] = t.angle_amplitude;
        tj["scale_amplitude"] = t.scale_amplitude;
        if (t.omega) tj["omega"] = *t.omega;
      }
      trajs.push_back(std::move(tj));
    }
    root["trajectories"] = std::move(trajs);
  }

  if (cfg.experiment == "dkf") {
    root["horizon"] = cfg.horizon;
    json d;
    d["runs"] = cfg.dkf.runs;
    d["state_dim"] = cfg.dkf.state_dim;
    if (cfg.dkf.dynamics) d["dynamics"] = matrix_to_json(*cfg.dkf.dynamics);
    d["process_noise"] = cfg.dkf.process_noise;
    d["meas_noise_range"] = {cfg.dkf.meas_noise_range[0],
                             cfg.dkf.meas_noise_range[1]};
    d["cdkf_c"] = cfg.dkf.cdkf_c;
    d["inner_rounds"] = cfg.dkf.inner_rounds;
    d["local_steps"] = cfg.dkf.local_steps;
    root["dkf"] = std::move(d);
  }

  if (cfg.experiment == "oracle-check") {
    root["oracle_check"] = {{"instances", cfg.oracle.instances},
                            {"nodes_range", {cfg.oracle.nodes_range[0],
                                             cfg.oracle.nodes_range[1]}},
                            {"dim_range", {cfg.oracle.dim_range[0],
                                           cfg.oracle.dim_range[1]}},
                            {"grid_step", cfg.oracle.grid_step}};
  }

  return root.dump(2) + "\n";
}

}  // namespace loewner
