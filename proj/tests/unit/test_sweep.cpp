// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace degen;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallIsing = R"({
  "model": "ising", "n_sites": 8, "fields": [0.0, 0.3, 1.0],
  "k": 8, "ensemble": {"count": 200, "master_seed": 3},
  "measurement": {"shots": 300}
})";

}  // namespace

TEST_CASE("model defaults are filled in") {
  const SweepConfig ising = validate_config(R"({"model": "ising", "fields": [0.5]})");
  CHECK(ising.n_sites == 16);
  CHECK(ising.J == -1.0);
  CHECK(ising.measurement.axis == Axis::x);
  CHECK(ising.ensemble.count == 8192);

  const SweepConfig dmi = validate_config(R"({"model": "dmi", "fields": {"start": 0, "stop": 0.2, "step": 0.05}})");
  CHECK(dmi.J == -0.5);
  CHECK(dmi.D == 1.0);
  CHECK(dmi.supercell_a == 3);
  CHECK(dmi.supercell_b == 2);
  CHECK(dmi.measurement.axis == Axis::z);
  CHECK(dmi.measurement.shots == 256);
  REQUIRE(dmi.fields.size() == 5);
  CHECK(dmi.fields[3] == 0.15);

  const SweepConfig echo = validate_config(config_to_json(dmi));
  CHECK(config_to_json(echo) == config_to_json(dmi));
}

TEST_CASE("invalid configurations name the offending field") {
  const auto message = [](const char* text) {
    try {
      validate_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"model": "ising"})").find("fields") != std::string::npos);
  CHECK(message(R"({"model": "potts", "fields": [0]})").find("model") != std::string::npos);
  CHECK(message(R"({"model": "ising", "fields": [0], "colour": 1})").find("colour") !=
        std::string::npos);
  CHECK(message(R"({"model": "ising", "fields": [0.2, 0.1]})").find("fields") != std::string::npos);
  CHECK(message(R"({"model": "ising", "fields": [0], "measurement": {"shots": 0}})")
            .find("measurement.shots") != std::string::npos);
  CHECK(message(R"({"model": "ising", "fields": [0], "D": 1})").find("'D'") != std::string::npos);
  CHECK(message(R"({"model": "ising", "fields": [0], "k": 0})").find("k") != std::string::npos);
  CHECK(message("{not json") != "no error");
  CHECK(message(R"({"model": "ising", "fields": [0], "ensemble": {"compare_laws": ["haar"]}})")
            .find("compare_laws") != std::string::npos);
  CHECK(message(R"({"model": "ising", "fields": [0], "bipartition": [0, 0]})") != "no error");
}

TEST_CASE("formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("thread count honours the environment") {
  setenv("THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  unsetenv("THREADS");
  CHECK(default_thread_count() >= 1);
}

TEST_CASE("small sweep is deterministic across thread counts") {
  const SweepConfig c = validate_config(kSmallIsing);
  const SweepResult one = run_sweep(c, {}, 1);
  const SweepResult three = run_sweep(c, {}, 3);
  CHECK_FALSE(one.any_failure);
  REQUIRE(one.points.size() == 3);
  for (std::size_t p = 0; p < 3; ++p) {
    const SweepRecord& a = one.points[p];
    const SweepRecord& b = three.points[p];
    CHECK(a.h == b.h);
    CHECK(a.degree == b.degree);
    CHECK(a.entropy_samples == b.entropy_samples);
    CHECK(a.shot_moments == b.shot_moments);
    for (std::size_t i = 0; i < a.energies.size(); ++i)
      CHECK(std::abs(a.energies[i] - b.energies[i]) < 1e-10);
  }
  // Zero field: the ferromagnetic pair; strong field: a unique ground state.
  CHECK(one.points[0].degree == 2);
  CHECK(one.points[2].degree == 1);
  CHECK(one.points[2].entropy_samples.size() == 1);
  CHECK(std::isnan(one.points[0].chirality));
}

TEST_CASE("a field point does not depend on the rest of the grid") {
  const SweepConfig c = validate_config(kSmallIsing);
  const SweepRecord alone = run_field_point(c, 0.3, 1);
  const SweepResult all = run_sweep(c, {}, 1);
  CHECK(alone.entropy_samples == all.points[1].entropy_samples);
  CHECK(alone.shot_moments == all.points[1].shot_moments);
}

TEST_CASE("outputs and manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "degen_sweep_test_out";
  std::filesystem::remove_all(dir);
  const SweepConfig c = validate_config(kSmallIsing);
  run_sweep(c, dir, 1);
  for (const char* f : {"energies.csv", "entropy.csv", "observables.csv", "magnetization.csv",
                        "config.json", "manifest.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const std::string energies = read_file(dir / "energies.csv");
  CHECK(energies.rfind("h,status,D,", 0) == 0);
  CHECK(std::count(energies.begin(), energies.end(), '\n') == 4);
  const std::string manifest = read_file(dir / "manifest.json");
  CHECK(manifest.find("\"master_seed\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("basis invariance experiment at zero field") {
  const SweepConfig c = validate_config(R"({
    "model": "ising", "experiment": "basis_invariance", "n_sites": 6, "fields": [0.0],
    "ensemble": {"count": 4000, "master_seed": 8, "compare_laws": ["haar_gaussian", "uniform_box"]},
    "measurement": {"enabled": false}
  })");
  const SweepResult r = run_sweep(c, {}, 1);
  REQUIRE(r.invariance.size() == 2);
  CHECK(r.invariance[1].law == CoefficientLaw::uniform_box);
  CHECK(r.invariance[1].reject_1pct);
  const InvarianceRow& row = r.invariance[0];
  CHECK(row.degree == 2);
  REQUIRE(row.closed_form_d.size() == row.samples_d.size());
  for (std::size_t i = 0; i < row.samples_d.size(); ++i) {
    CHECK(std::abs(row.samples_d[i] - row.closed_form_d[i]) < 1e-10);
    CHECK(std::abs(row.samples_e[i] - row.closed_form_e[i]) < 1e-10);
  }
  CHECK_FALSE(row.reject_1pct);
}
