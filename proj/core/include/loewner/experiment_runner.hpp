// Executes a validated experiment config and writes its outputs:
// <out>/metrics.csv and <out>/summary.json. CSV bytes are a pure function of
// (config, seed); the summary's wall_time_s is the only run-varying field.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loewner/experiment_config.hpp"
#include "loewner/simulation.hpp"

namespace loewner {

struct RunOverrides {
  std::optional<std::uint64_t> seed;  // replaces the config seed
  std::optional<std::string> out;     // replaces the config output directory
  long oracle_every = 1;              // centralized-solve cadence (consensus)
};

struct ExperimentResult {
  std::string experiment;
  std::uint64_t seed = 0;
  // First round from which the error series stays inside the steady band
  // (1.05x the maximum over the last quarter of the series, floored at the
  // 1e-5 reporting tolerance); -1 when the series never settles.
  long k_measured = -1;
  // Maximum error over rounds [K+50, K+500] clipped to the horizon; falls
  // back to the maximum over [K, end] when the window is empty.
  double delta_measured = 0.0;
  SolverStats stats;
  long clamp_count = 0;
  double wall_time_s = 0.0;
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
};

// Throws ValidationError for override/config inconsistencies detected before
// the run and RuntimeFailure wrapping anything that fails after that.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RunOverrides& ov = {});

// Consensus-run rows: `k, node, eig_index, q_node, q_star, abs_err, f_node,
// f_star`. Node and eigenvalue indices are 1-based; initialization (k = 0)
// is not emitted. Reals are %.17g. Throws ValidationError on empty input and
// IoError on write failure.
void write_consensus_csv(const ErrorMetrics& metrics,
                         const std::filesystem::path& path);

// Filter-comparison rows: `k, filter, mse` with filter one of {centralized,
// proposed, cdkf}, k-major in that order, k from 0.
void write_dkf_csv(const std::vector<double>& centralized,
                   const std::vector<double>& proposed,
                   const std::vector<double>& cdkf,
                   const std::filesystem::path& path);

}  // namespace loewner
