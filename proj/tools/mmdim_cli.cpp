#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmdim/error.hpp"
#include "mmdim/experiments.hpp"
#include "mmdim/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Metric mean dimension experiments for free semigroup actions"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "Experiment config (key = value, [section] headers)")->required();
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_dir, "Directory for <experiment>.csv and <experiment>.json");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mmdim::kExitConfig;
  }

  mmdim::set_thread_count(threads);
  mmdim::ExperimentOutput out;
  try {
    out = mmdim::run_experiment(mmdim::Config::load(config_path), seed);
  } catch (const mmdim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mmdim::kExitConfig;
  }
  try {
    mmdim::write_outputs(out, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mmdim::kExitConfig;
  }
  if (out.exit_code != mmdim::kExitOk) std::cerr << out.experiment << ": " << (out.message.empty() ? "invariant violated" : out.message) << "\n";
  return out.exit_code;
}
