// Experiment front end: reads a JSON config, runs it, writes metrics.csv and
// summary.json into the output directory. Exit codes: 0 success, 1 bad
// config or arguments, 2 failure during the run.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "loewner/errors.hpp"
#include "loewner/experiment_config.hpp"
#include "loewner/experiment_runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Distributed outer-ellipsoid consensus experiments"};
  app.set_help_flag("-h,--help", "Print usage and exit");

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  long oracle_every = 1;
  bool quiet = false;

  app.add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out", out_dir, "Override the output directory");
  app.add_option("--oracle-every", oracle_every,
                 "Solve the centralized reference every this many rounds");
  app.add_flag("--quiet", quiet, "Suppress the summary line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::ifstream ifs(config_path, std::ios::binary);
    if (!ifs) {
      std::fprintf(stderr, "error: cannot read config '%s'\n",
                   config_path.c_str());
      return 1;
    }
    const std::string text{std::istreambuf_iterator<char>(ifs),
                           std::istreambuf_iterator<char>()};

    const loewner::ExperimentConfig cfg = loewner::parse_config(text);
    loewner::RunOverrides ov;
    ov.seed = seed;
    ov.out = out_dir;
    ov.oracle_every = oracle_every;

    const loewner::ExperimentResult res = loewner::run_experiment(cfg, ov);
    if (!quiet) {
      std::printf(
          "%s: seed=%llu K=%ld delta=%.3g solves=%ld wall=%.2fs -> %s\n",
          res.experiment.c_str(),
          static_cast<unsigned long long>(res.seed), res.k_measured,
          res.delta_measured, res.stats.solves, res.wall_time_s,
          res.csv_path.string().c_str());
    }
    return 0;
  } catch (const loewner::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const loewner::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failed: %s\n", e.what());
    return 2;
  }
}
