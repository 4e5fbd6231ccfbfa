// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_SWEEP_HPP
#define DEGEN_SWEEP_HPP

#include "degen/ensemble.hpp"
#include "degen/hamiltonian.hpp"
#include "degen/measurement.hpp"
#include "degen/observables.hpp"
#include "degen/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace degen {

enum class Model { ising, dmi };
enum class Experiment { field_sweep, basis_invariance };

struct NearDegenerateRule {
  bool enabled = false;
  /// Applies at fields h <= max_field.
  double max_field = 0.0;
  /// Grouping tolerance used instead of eps_deg inside the window.
  std::optional<double> eps;
  /// Forces the ground multiplet to the lowest `degree` states inside the window.
  std::optional<int> degree;
};

struct EnsembleConfig {
  int count = 8192;
  CoefficientLaw law = CoefficientLaw::haar_gaussian;
  std::uint64_t master_seed = 1;
  int bins = 50;
  /// Support truncation of the subspace entropy sampler.
  double truncation = 1e-15;
  bool write_samples = true;
  /// Laws compared by the basis-invariance experiment; empty means {law}.
  std::vector<CoefficientLaw> compare_laws;
};

struct MeasurementConfig {
  bool enabled = true;
  long shots = 8192;
  Axis axis = Axis::x;
  long reuse = 1;
};

/// Fully resolved sweep description; every default is explicit.
struct SweepConfig {
  Model model = Model::ising;
  Experiment experiment = Experiment::field_sweep;
  // chain
  int n_sites = 16;
  bool periodic = true;
  // triangular supercell, or a geometry file that replaces it
  int supercell_a = 3;
  int supercell_b = 2;
  std::optional<std::filesystem::path> geometry_file;

  double J = -1.0;
  double D = 1.0;
  DmConvention dm_convention = DmConvention::z_cross_u;
  std::vector<double> fields;

  int k = 16;
  int block_size = 8;
  int max_basis = 0;
  double solver_tol = 1e-8;
  int max_iterations = 2000;
  std::uint64_t solver_seed = 0x5eed;
  /// Exact-degeneracy tolerance; unset means 1e-10 * max(1, |E0|).
  std::optional<double> eps_deg;
  NearDegenerateRule near_degenerate;

  EnsembleConfig ensemble;
  /// Subsystem A; unset means the model default (half chain or geometric half).
  std::optional<std::vector<int>> bipartition;
  MeasurementConfig measurement;
  UrsellForm ursell_form = UrsellForm::literal;

  std::optional<std::filesystem::path> output_dir;
};

/// Parses JSON text, fills model defaults and cross-validates. Unknown keys
/// and out-of-range values raise ConfigError naming the offending field.
SweepConfig validate_config(const std::string& json_text);
SweepConfig load_config(const std::filesystem::path& path);
/// JSON echo with all defaults explicit (round-trips through validate_config).
std::string config_to_json(const SweepConfig& config);

/// Results for one field value.
struct SweepRecord {
  double h = 0.0;
  bool ok = false;
  std::string error;
  std::vector<double> energies;
  double max_residual = 0.0;
  int degree = 0;
  /// E_{D-1} - E_0 of the chosen ground multiplet.
  double multiplet_spread = 0.0;
  /// E_D - E_{D-1}; NaN when the multiplet uses all k states.
  double gap_above = 0.0;

  std::vector<double> entropy_samples;
  double entropy_mean = 0.0;
  double entropy_std = 0.0;
  std::vector<double> histogram_edges;
  std::vector<double> histogram;
  int sampler_rank = 0;

  double chirality = 0.0;
  double gamma2_nn = 0.0;
  double gamma2_nnn = 0.0;
  double gamma3 = 0.0;

  Axis axis = Axis::x;
  std::vector<double> exact_moments;
  double exact_mean = 0.0;
  std::vector<double> shot_moments;
  double shot_mean = 0.0;
  /// Binomial standard deviation bound of the site-averaged estimate.
  double shot_sigma = 0.0;
  long shots = 0;
  std::vector<MeasurementRecord> records;

  double seconds = 0.0;
  /// Wall time per stage (solve, entropy, observables, shots).
  std::vector<std::pair<std::string, double>> stage_seconds;
};

/// One Kolmogorov-Smirnov comparison of the two basis variants.
struct InvarianceRow {
  double h = 0.0;
  CoefficientLaw law = CoefficientLaw::haar_gaussian;
  int degree = 0;
  /// min(|A|, |B|), the histogram range.
  double max_entropy = 1.0;
  std::vector<double> samples_d;
  std::vector<double> samples_e;
  /// Closed-form entropies for the same coefficients, when the basis is the
  /// zero-field Ising product pair; otherwise empty.
  std::vector<double> closed_form_d;
  std::vector<double> closed_form_e;
  double ks_statistic = 0.0;
  double p_value = 1.0;
  double critical_1pct = 0.0;
  bool reject_1pct = false;
  double mean_d = 0.0;
  double mean_e = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRecord> points;  // sorted by h
  /// Basis-invariance rows ordered by h, then by compared law.
  std::vector<InvarianceRow> invariance;
  bool any_failure = false;
  int threads = 1;
};

/// Runs every field point (in parallel, up to `threads` workers) and, if
/// `out_dir` is non-empty, writes the CSV files, per-point record files and
/// manifest.json there. Solver failures are recorded per point.
SweepResult run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir,
                      int threads);

/// Runs one field point of a field sweep.
SweepRecord run_field_point(const SweepConfig& config, double h, int threads);

/// Worker count: THREADS env var if set, else the hardware concurrency.
int default_thread_count();

/// %.17g formatting (round-trip exact for doubles); NaN prints as "nan".
std::string format_double(double x);

}  // namespace degen

#endif  // DEGEN_SWEEP_HPP
