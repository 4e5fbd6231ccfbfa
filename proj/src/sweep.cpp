// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/sweep.hpp"

#include "degen/eigensolver.hpp"
#include "degen/entanglement.hpp"
#include "degen/lattice.hpp"
#include "degen/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace degen {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LatticeGeometry make_geometry(const SweepConfig& c) {
  if (c.model == Model::ising) return build_chain(c.n_sites, c.periodic);
  if (c.geometry_file) return load_geometry(*c.geometry_file);
  return build_triangular_supercell(c.supercell_a, c.supercell_b);
}

HamiltonianTerms make_hamiltonian(const SweepConfig& c, const LatticeGeometry& g, double h) {
  if (c.model == Model::ising) return build_ising(g, c.J, h);
  return build_dmi(g, c.J, c.D, h, c.dm_convention);
}

BipartitionMask make_mask(const SweepConfig& c, const LatticeGeometry& g) {
  if (c.bipartition) return {g.n_sites, *c.bipartition};
  if (c.model == Model::ising) return BipartitionMask::half_chain(g.n_sites);
  return BipartitionMask::geometric_half(g);
}

SolverOptions solver_options(const SweepConfig& c) {
  SolverOptions o;
  o.k = c.k;
  o.tol = c.solver_tol;
  o.block_size = c.block_size;
  o.max_basis = c.max_basis;
  o.max_iterations = c.max_iterations;
  o.seed = c.solver_seed;
  return o;
}

bool in_near_window(const SweepConfig& c, double h) {
  return c.near_degenerate.enabled && h <= c.near_degenerate.max_field + 1e-12;
}

int choose_degree(const SweepConfig& c, const std::vector<double>& energies, double h) {
  double eps = c.eps_deg ? *c.eps_deg : default_degeneracy_eps(energies.front());
  if (in_near_window(c, h)) {
    if (c.near_degenerate.degree) return std::min<int>(*c.near_degenerate.degree, energies.size());
    eps = *c.near_degenerate.eps;
  }
  return static_cast<int>(group_multiplets(energies, eps).front().degree);
}

std::uint64_t measurement_seed(const SweepConfig& c) {
  return RngStream::derive(c.ensemble.master_seed, 0, StreamTag::shot);
}

std::uint64_t variant_e_seed(const SweepConfig& c) {
  return splitmix64(c.ensemble.master_seed ^ 0x65ULL);
}

std::size_t available_memory_bytes() {
  std::ifstream in("/proc/meminfo");
  std::string key;
  std::size_t kb = 0;
  std::string unit;
  while (in >> key >> kb >> unit) {
    if (key == "MemAvailable:") return kb * 1024;
  }
  return std::size_t{4} << 30;
}

int memory_limited_workers(const SweepConfig& c, int n_sites, int wanted) {
  const std::size_t dim = hilbert_dimension(n_sites);
  const std::size_t basis =
      c.max_basis > 0 ? c.max_basis : std::max(2 * c.k + 4 * c.block_size, 96);
  const std::size_t vectors = 2 * basis + 4 * static_cast<std::size_t>(c.block_size) + 8;
  const std::size_t per_point = vectors * dim * sizeof(Complex);
  const std::size_t budget = available_memory_bytes() * 7 / 10;
  const auto fit = static_cast<int>(std::max<std::size_t>(1, budget / std::max<std::size_t>(per_point, 1)));
  return std::max(1, std::min(wanted, fit));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

std::string point_tag(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "h_%03zu", index);
  return buf;
}

std::string histogram_csv(const std::vector<double>& edges, const std::vector<double>& probs) {
  std::string out = "bin_left,bin_right,probability\n";
  for (std::size_t b = 0; b < probs.size(); ++b) {
    out += format_double(edges[b]) + "," + format_double(edges[b + 1]) + "," +
           format_double(probs[b]) + "\n";
  }
  return out;
}

template <typename F>
void parallel_for(int count, int workers, F&& body) {
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < count; i = next++) body(i);
  };
  std::vector<std::jthread> pool;
  for (int t = 1; t < std::min(workers, count); ++t) pool.emplace_back(work);
  work();
}

std::vector<CoefficientLaw> compared_laws(const SweepConfig& c) {
  return c.ensemble.compare_laws.empty() ? std::vector<CoefficientLaw>{c.ensemble.law}
                                         : c.ensemble.compare_laws;
}

InvarianceRow compare_bases(const SweepConfig& c, double h, CoefficientLaw law,
                            const SubspaceEntropySampler& sampler_d,
                            const SubspaceEntropySampler& sampler_e, double max_entropy,
                            bool product_pair, int threads) {
  InvarianceRow row;
  row.h = h;
  row.law = law;
  row.degree = sampler_d.degree();
  row.max_entropy = max_entropy;
  const std::uint64_t seed_e = variant_e_seed(c);
  row.samples_d = sample_entropies(sampler_d, c.ensemble.count, law, c.ensemble.master_seed, threads);
  row.samples_e = sample_entropies(sampler_e, c.ensemble.count, law, seed_e, threads);
  if (product_pair) {
    for (int i = 0; i < c.ensemble.count; ++i) {
      const auto a = sample_coefficients(2, law, c.ensemble.master_seed, static_cast<std::uint64_t>(i));
      row.closed_form_d.push_back(closed_form_ising_entropy(a[0], a[1], IsingVariant::d));
      const auto b = sample_coefficients(2, law, seed_e, static_cast<std::uint64_t>(i));
      row.closed_form_e.push_back(closed_form_ising_entropy(b[0], b[1], IsingVariant::e));
    }
  }
  const stats::KsResult ks = stats::ks_two_sample(row.samples_d, row.samples_e);
  row.ks_statistic = ks.statistic;
  row.p_value = ks.p_value;
  row.critical_1pct = ks.critical_1pct;
  row.reject_1pct = ks.reject_1pct;
  row.mean_d = stats::mean_std(row.samples_d).mean;
  row.mean_e = stats::mean_std(row.samples_e).mean;
  return row;
}

std::vector<InvarianceRow> run_invariance_point(const SweepConfig& c, double h, int threads) {
  const LatticeGeometry g = make_geometry(c);
  const HamiltonianTerms H = make_hamiltonian(c, g, h);
  const BipartitionMask mask = make_mask(c, g);

  StateBlock basis_d;
  bool product_pair = false;
  if (c.model == Model::ising && h == 0.0 && g.n_sites >= 2) {
    basis_d = ising_product_basis(g.n_sites);
    product_pair = true;
    const double e0 = expectation(H, StateVector(basis_d.col(0)));
    const double e1 = expectation(H, StateVector(basis_d.col(1)));
    const std::vector<double> energies{e0, e1};
    for (double r : residual_norms(H, basis_d, energies)) {
      if (r > c.solver_tol) throw SolverError("product states are not eigenstates at h = 0", r);
    }
  } else {
    const EigenSolution sol = lowest_eigenpairs(H, solver_options(c));
    const int degree = choose_degree(c, sol.energies, h);
    basis_d = refine_degenerate_block(H, sol.vectors.leftCols(degree)).vectors;
  }
  const StateBlock basis_e = fourier_remix(basis_d);
  const SubspaceEntropySampler sampler_d(basis_d, mask, c.ensemble.truncation);
  const SubspaceEntropySampler sampler_e(basis_e, mask, c.ensemble.truncation);

  const double max_entropy =
      static_cast<double>(std::min(mask.sites_a().size(), mask.sites_b().size()));
  std::vector<InvarianceRow> rows;
  for (CoefficientLaw law : compared_laws(c)) {
    rows.push_back(
        compare_bases(c, h, law, sampler_d, sampler_e, max_entropy, product_pair, threads));
  }
  return rows;
}

void write_outputs(const SweepResult& r, const std::filesystem::path& out,
                   const std::vector<double>& point_seconds) {
  namespace fs = std::filesystem;
  const SweepConfig& c = r.config;
  fs::create_directories(out);
  nlohmann::json manifest;
  manifest["program"] = "degen sweep";
  manifest["version"] = kVersion;
  manifest["config"] = nlohmann::json::parse(config_to_json(c));
  manifest["threads"] = r.threads;
  manifest["seeds"] = {{"ensemble_master_seed", c.ensemble.master_seed},
                       {"measurement_seed", measurement_seed(c)},
                       {"variant_e_seed", variant_e_seed(c)},
                       {"solver_seed", c.solver_seed}};
  manifest["versions"] = {{"degen", kVersion},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)},
                          {"compiler", __VERSION__}};
  std::vector<std::string> files;
  auto emit = [&](const fs::path& rel, const std::string& text) {
    fs::create_directories((out / rel).parent_path());
    write_text(out / rel, text);
    files.push_back(rel.generic_string());
  };

  if (c.experiment == Experiment::basis_invariance) {
    std::string csv = "h,law,D,sample_count,ks_statistic,p_value,critical_1pct,reject_1pct,mean_d,mean_e\n";
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < r.invariance.size(); ++i) {
      const InvarianceRow& row = r.invariance[i];
      csv += format_double(row.h) + "," + law_name(row.law) + "," + std::to_string(row.degree) +
             "," + std::to_string(row.samples_d.size()) + "," + format_double(row.ks_statistic) +
             "," + format_double(row.p_value) + "," + format_double(row.critical_1pct) + "," +
             (row.reject_1pct ? "1" : "0") + "," + format_double(row.mean_d) + "," +
             format_double(row.mean_e) + "\n";
      const std::string tag = point_tag(i / compared_laws(c).size());
      for (int v = 0; v < 2; ++v) {
        const auto& s = v == 0 ? row.samples_d : row.samples_e;
        const auto& cf = v == 0 ? row.closed_form_d : row.closed_form_e;
        const std::string name = law_name(row.law) + (v == 0 ? "_d" : "_e");
        std::string samples = cf.empty() ? "sample_index,entropy_bits\n"
                                         : "sample_index,entropy_bits,closed_form_bits\n";
        for (std::size_t j = 0; j < s.size(); ++j) {
          samples += std::to_string(j) + "," + format_double(s[j]);
          if (!cf.empty()) samples += "," + format_double(cf[j]);
          samples += "\n";
        }
        emit(fs::path("invariance") / (tag + "_" + name + "_samples.csv"), samples);
        const EntropyStatistics st = summarize_entropies(s, row.max_entropy, c.ensemble.bins);
        emit(fs::path("invariance") / (tag + "_" + name + "_hist.csv"),
             histogram_csv(st.bin_edges, st.probabilities));
      }
      points.push_back({{"index", i / compared_laws(c).size()},
                        {"h", row.h},
                        {"law", law_name(row.law)},
                        {"status", "ok"}});
    }
    emit("invariance.csv", csv);
    manifest["points"] = points;
  } else {
    std::string energies = "h,status,D,multiplet_spread,gap_above,max_residual";
    for (int i = 0; i < c.k; ++i) energies += ",E" + std::to_string(i);
    energies += "\n";
    std::string entropy = "h,mean_bits,std_bits,sample_count\n";
    std::string observables = "h,D,Q_psi,gamma2_nn,gamma2_nnn,gamma3,S_mean,S_std\n";
    std::string magnet = "h,axis,D,exact_mean,single_shot_mean,sigma,shots\n";
    std::string magnet_sites = "h,site,exact,single_shot\n";
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      const SweepRecord& p = r.points[i];
      const std::string tag = point_tag(i);
      nlohmann::json entry = {{"index", i},
                              {"h", p.h},
                              {"status", p.ok ? "ok" : "solver_failed"},
                              {"seconds", point_seconds[i]}};
      for (const auto& [stage, t] : p.stage_seconds) entry["stage_seconds"][stage] = t;
      if (!p.ok) {
        entry["error"] = p.error;
        energies += format_double(p.h) + ",solver_failed,,,,";
        for (int e = 0; e < c.k; ++e) energies += ",";
        energies += "\n";
        points.push_back(entry);
        continue;
      }
      energies += format_double(p.h) + ",ok," + std::to_string(p.degree) + "," +
                  format_double(p.multiplet_spread) + "," + format_double(p.gap_above) + "," +
                  format_double(p.max_residual);
      for (double e : p.energies) energies += "," + format_double(e);
      energies += "\n";
      entropy += format_double(p.h) + "," + format_double(p.entropy_mean) + "," +
                 format_double(p.entropy_std) + "," + std::to_string(p.entropy_samples.size()) + "\n";
      observables += format_double(p.h) + "," + std::to_string(p.degree) + "," +
                     format_double(p.chirality) + "," + format_double(p.gamma2_nn) + "," +
                     format_double(p.gamma2_nnn) + "," + format_double(p.gamma3) + "," +
                     format_double(p.entropy_mean) + "," + format_double(p.entropy_std) + "\n";
      const bool shots = !p.shot_moments.empty();
      magnet += format_double(p.h) + "," + std::string(1, axis_name(p.axis)) + "," +
                std::to_string(p.degree) + "," + format_double(p.exact_mean) + "," +
                (shots ? format_double(p.shot_mean) : "nan") + "," +
                (shots ? format_double(p.shot_sigma) : "nan") + "," + std::to_string(p.shots) + "\n";
      for (std::size_t s = 0; s < p.exact_moments.size(); ++s) {
        magnet_sites += format_double(p.h) + "," + std::to_string(s) + "," +
                        format_double(p.exact_moments[s]) + "," +
                        (shots ? format_double(p.shot_moments[s]) : "nan") + "\n";
      }
      if (c.ensemble.write_samples) {
        std::string samples = "sample_index,entropy_bits\n";
        for (std::size_t j = 0; j < p.entropy_samples.size(); ++j) {
          samples += std::to_string(j) + "," + format_double(p.entropy_samples[j]) + "\n";
        }
        emit(fs::path("entropy_samples") / (tag + ".csv"), samples);
        entry["entropy_samples"] = "entropy_samples/" + tag + ".csv";
      }
      emit(fs::path("entropy_hist") / (tag + ".csv"), histogram_csv(p.histogram_edges, p.histogram));
      entry["entropy_hist"] = "entropy_hist/" + tag + ".csv";
      if (shots) {
        const fs::path rel = fs::path("records") / (tag + ".txt");
        fs::create_directories((out / rel).parent_path());
        write_records(out / rel, p.records);
        files.push_back(rel.generic_string());
        entry["records"] = rel.generic_string();
      }
      entry["D"] = p.degree;
      entry["sampler_rank"] = p.sampler_rank;
      points.push_back(entry);
    }
    emit("energies.csv", energies);
    emit("entropy.csv", entropy);
    emit("observables.csv", observables);
    emit("magnetization.csv", magnet);
    emit("magnetization_sites.csv", magnet_sites);
    manifest["points"] = points;
  }
  emit("config.json", config_to_json(c) + "\n");
  files.push_back("manifest.json");
  manifest["files"] = files;
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int default_thread_count() {
  if (const char* env = std::getenv("THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    throw ConfigError("THREADS must be an integer in [1, 1024], got '" + std::string(env) + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepRecord run_field_point(const SweepConfig& c, double h, int threads) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord rec;
  auto last = start;
  const auto lap = [&](const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    rec.stage_seconds.emplace_back(stage, std::chrono::duration<double>(now - last).count());
    last = now;
  };
  rec.h = h;
  rec.axis = c.measurement.axis;
  const LatticeGeometry g = make_geometry(c);
  const HamiltonianTerms H = make_hamiltonian(c, g, h);
  const BipartitionMask mask = make_mask(c, g);

  EigenSolution sol;
  StateBlock basis;
  try {
    sol = lowest_eigenpairs(H, solver_options(c));
    rec.degree = choose_degree(c, sol.energies, h);
    basis = refine_degenerate_block(H, sol.vectors.leftCols(rec.degree)).vectors;
  } catch (const SolverError& e) {
    rec.error = e.what();
    return rec;
  } catch (const std::runtime_error& e) {
    rec.error = e.what();
    return rec;
  }
  lap("solve");
  rec.ok = true;
  rec.energies = sol.energies;
  rec.max_residual = sol.max_residual();
  rec.multiplet_spread = sol.energies[rec.degree - 1] - sol.energies[0];
  rec.gap_above = rec.degree < c.k ? sol.energies[rec.degree] - sol.energies[rec.degree - 1] : kNaN;

  const SubspaceEntropySampler sampler(basis, mask, c.ensemble.truncation);
  rec.sampler_rank = sampler.rank();
  if (rec.degree == 1) {
    CoefficientVector one(1);
    one[0] = 1.0;
    rec.entropy_samples = {sampler.entropy(one)};
  } else {
    rec.entropy_samples =
        sample_entropies(sampler, c.ensemble.count, c.ensemble.law, c.ensemble.master_seed, threads);
  }
  const double max_entropy =
      static_cast<double>(std::min(mask.sites_a().size(), mask.sites_b().size()));
  const EntropyStatistics st = summarize_entropies(rec.entropy_samples, max_entropy, c.ensemble.bins);
  rec.entropy_mean = st.mean;
  rec.entropy_std = st.std;
  rec.histogram_edges = st.bin_edges;
  rec.histogram = st.probabilities;
  lap("entropy");

  const ZCorrelations z(basis);
  rec.gamma2_nn = shell_ursell2(z, g, 1);
  rec.gamma2_nnn = shell_ursell2(z, g, 2);
  rec.gamma3 = triangle_ursell3(z, g, c.ursell_form);
  rec.chirality = g.triangles.empty() ? kNaN : scalar_chirality(basis, g.triangles);

  rec.exact_moments = local_moments(basis, rec.axis);
  double sum = 0.0;
  for (double m : rec.exact_moments) sum += m;
  rec.exact_mean = sum / static_cast<double>(rec.exact_moments.size());
  lap("observables");

  if (c.measurement.enabled) {
    ShotOptions opt;
    opt.shots = c.measurement.shots;
    opt.axis = rec.axis;
    opt.master_seed = measurement_seed(c);
    opt.law = c.ensemble.law;
    opt.reuse = c.measurement.reuse;
    opt.threads = threads;
    rec.records = single_shot_protocol(basis, opt);
    rec.shots = opt.shots;
    rec.shot_moments = estimate_magnetization(rec.records);
    double shot_sum = 0.0;
    double sigma_sum = 0.0;
    for (std::size_t i = 0; i < rec.shot_moments.size(); ++i) {
      shot_sum += rec.shot_moments[i];
      const double p = std::clamp(0.5 + rec.exact_moments[i], 0.0, 1.0);
      sigma_sum += std::sqrt(p * (1.0 - p) / static_cast<double>(opt.shots));
    }
    const double n = static_cast<double>(rec.shot_moments.size());
    rec.shot_mean = shot_sum / n;
    // The site average of correlated estimates has a standard deviation no
    // larger than the average of the per-site ones.
    rec.shot_sigma = sigma_sum / n;
    lap("shots");
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

SweepResult run_sweep(const SweepConfig& config, const std::filesystem::path& out_dir, int threads) {
  SweepResult result;
  result.config = config;
  result.threads = std::max(1, threads);
  const int n_points = static_cast<int>(config.fields.size());
  const int n_sites = make_geometry(config).n_sites;
  const int workers = memory_limited_workers(config, n_sites, std::min(result.threads, n_points));
  const int inner = std::max(1, result.threads / workers);
  std::vector<double> seconds(static_cast<std::size_t>(n_points), 0.0);

  if (config.experiment == Experiment::basis_invariance) {
    std::vector<std::vector<InvarianceRow>> rows(static_cast<std::size_t>(n_points));
    std::mutex failure_mutex;
    std::string failure;
    parallel_for(n_points, workers, [&](int i) {
      try {
        rows[i] = run_invariance_point(config, config.fields[i], inner);
      } catch (const SolverError& e) {
        std::lock_guard lock(failure_mutex);
        failure = e.what();
      }
    });
    if (!failure.empty()) throw SolverError(failure, kNaN);
    for (auto& point_rows : rows)
      for (InvarianceRow& row : point_rows) result.invariance.push_back(std::move(row));
  } else {
    result.points.resize(static_cast<std::size_t>(n_points));
    parallel_for(n_points, workers, [&](int i) {
      result.points[i] = run_field_point(config, config.fields[i], inner);
      seconds[i] = result.points[i].seconds;
    });
    for (const SweepRecord& p : result.points) result.any_failure |= !p.ok;
  }
  if (!out_dir.empty()) write_outputs(result, out_dir, seconds);
  return result;
}

}  // namespace degen
