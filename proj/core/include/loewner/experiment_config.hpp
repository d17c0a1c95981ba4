// Experiment descriptions as JSON documents. Matrices are embedded verbatim
// as row-major arrays (information form allowed via "p_inv") so a config can
// be audited against its source by eye. Node ids in configs are 1-based;
// everything internal is 0-based.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loewner/mat.hpp"
#include "loewner/objective.hpp"
#include "loewner/simplex_solver.hpp"
#include "loewner/sym_mat.hpp"

namespace loewner {

struct RandomGraphSpec {
  std::size_t nodes = 0;
  double edge_prob = 0.5;
  bool operator==(const RandomGraphSpec&) const = default;
};

// Either an explicit 1-based edge list over `nodes` vertices, or a seeded
// random connected graph.
struct GraphSpec {
  std::size_t nodes = 0;
  std::vector<std::pair<int, int>> edges;  // 1-based, as written in configs
  std::optional<RandomGraphSpec> random;
  bool operator==(const GraphSpec&) const = default;
};

struct TrajectorySpec {
  enum class Kind { Static, Oscillatory };
  Kind kind = Kind::Static;
  SymMat matrix;            // as written in the config
  bool given_as_inverse = false;  // true when the config supplied "p_inv"
  double angle_amplitude = 0.0;   // oscillatory only
  double scale_amplitude = 0.0;
  std::optional<double> omega;    // absent: drawn from omega_range per seed

  SymMat base_covariance() const;  // inverts when given_as_inverse
  bool operator==(const TrajectorySpec&) const = default;
};

struct ThetaSpec {
  bool adaptive = false;
  double theta_bar = 1.0;  // fixed mode
  double kappa = 1.0;      // adaptive mode
  bool operator==(const ThetaSpec&) const = default;
};

struct DkfSpec {
  int runs = 20;
  std::size_t state_dim = 2;
  std::optional<Mat> dynamics;  // absent: mild stable rotation (see runner)
  double process_noise = 2e-8;  // W = process_noise * I
  std::array<double, 2> meas_noise_range{0.03, 0.05};  // V_i = mu_i * I
  double cdkf_c = 0.1;
  long inner_rounds = 10;
  int local_steps = 1;
  bool operator==(const DkfSpec&) const = default;
};

struct OracleCheckSpec {
  int instances = 50;
  std::array<int, 2> nodes_range{2, 3};  // inclusive
  std::array<int, 2> dim_range{2, 3};    // inclusive
  double grid_step = 0.01;
  bool operator==(const OracleCheckSpec&) const = default;
};

struct ExperimentConfig {
  std::string experiment;  // static | dynamic | dkf | oracle-check
  GraphSpec graph;
  std::vector<TrajectorySpec> trajectories;  // consensus experiments
  std::optional<std::array<double, 2>> omega_range;  // dynamic default [1,2]
  ThetaSpec theta;
  ObjectiveKind objective = ObjectiveKind::NegLogDet;
  long rounds = 0;   // consensus experiments
  long horizon = 0;  // dkf
  std::uint64_t seed = 0;
  SolverConfig solver;
  std::string out = "results";
  DkfSpec dkf;
  OracleCheckSpec oracle;
  bool operator==(const ExperimentConfig&) const = default;
};

// Parses and validates. Throws ParseError for malformed JSON or wrong types
// (message carries the field path) and ValidationError for well-formed but
// inconsistent configs (theta_bar < 1, non-PD matrix, bad graph, ...).
ExperimentConfig parse_config(const std::string& text);

// Inverse of parse_config up to JSON formatting: parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace loewner
