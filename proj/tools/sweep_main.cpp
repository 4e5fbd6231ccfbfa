// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate ground-state ensembles: field sweeps and single-shot estimates"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Run a sweep and write CSV/JSON outputs");
  run->add_option("config", config_path, "Sweep config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (default: config output_dir or ./sweep_out)");
  CLI::Option* threads_opt =
      run->add_option("--threads", threads, "Worker threads (default: THREADS env or all cores)")
          ->check(CLI::Range(1, 1024));
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override ensemble.master_seed");

  CLI::App* validate = app.add_subcommand("validate", "Check a config and print it with defaults");
  validate->add_option("config", config_path, "Sweep config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    degen::SweepConfig config = degen::load_config(config_path);
    if (validate->parsed()) {
      std::cout << degen::config_to_json(config) << "\n";
      return 0;
    }
    if (*seed_opt) config.ensemble.master_seed = seed;
    const int n_threads = *threads_opt ? threads : degen::default_thread_count();
    std::filesystem::path out = out_dir;
    if (out.empty()) out = config.output_dir ? *config.output_dir : std::filesystem::path("sweep_out");

    const degen::SweepResult result = degen::run_sweep(config, out, n_threads);
    for (const degen::SweepRecord& p : result.points) {
      if (p.ok) {
        std::string stages;
        for (const auto& [stage, t] : p.stage_seconds) {
          char buf[64];
          std::snprintf(buf, sizeof buf, " %s %.1f", stage.c_str(), t);
          stages += buf;
        }
        std::fprintf(stderr, "h=%-8s D=%d S=%.4f+-%.4f (%.1f s:%s)\n",
                     degen::format_double(p.h).c_str(), p.degree, p.entropy_mean, p.entropy_std,
                     p.seconds, stages.c_str());
      } else {
        std::fprintf(stderr, "h=%-8s solver failed: %s\n", degen::format_double(p.h).c_str(),
                     p.error.c_str());
      }
    }
    for (const degen::InvarianceRow& r : result.invariance) {
      std::fprintf(stderr, "h=%s law=%s KS D=%.5f (1%% critical %.5f) p=%.4g -> %s\n",
                   degen::format_double(r.h).c_str(), degen::law_name(r.law).c_str(),
                   r.ks_statistic, r.critical_1pct, r.p_value,
                   r.reject_1pct ? "different" : "compatible");
    }
    std::fprintf(stderr, "outputs in %s\n", out.string().c_str());
    return result.any_failure ? kExitSolver : 0;
  } catch (const degen::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const degen::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
