// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/eigensolver.hpp"
#include "degen/ensemble.hpp"
#include "degen/entanglement.hpp"
#include "degen/hamiltonian.hpp"
#include "degen/lattice.hpp"
#include "degen/measurement.hpp"
#include "degen/observables.hpp"
#include "degen/stats.hpp"
#include "degen/sweep.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace degen;

namespace {

SpinProduct make_product(const std::vector<std::pair<int, std::string>>& factors) {
  SpinProduct p;
  for (const auto& [site, axis] : factors) p.factors.emplace_back(site, parse_axis(axis));
  return p;
}

py::dict record_to_dict(const SweepRecord& r) {
  py::dict d;
  d["h"] = r.h;
  d["ok"] = r.ok;
  d["error"] = r.error;
  d["energies"] = r.energies;
  d["max_residual"] = r.max_residual;
  d["degree"] = r.degree;
  d["multiplet_spread"] = r.multiplet_spread;
  d["gap_above"] = r.gap_above;
  d["entropy_samples"] = r.entropy_samples;
  d["entropy_mean"] = r.entropy_mean;
  d["entropy_std"] = r.entropy_std;
  d["histogram_edges"] = r.histogram_edges;
  d["histogram"] = r.histogram;
  d["chirality"] = r.chirality;
  d["gamma2_nn"] = r.gamma2_nn;
  d["gamma2_nnn"] = r.gamma2_nnn;
  d["gamma3"] = r.gamma3;
  d["axis"] = std::string(1, axis_name(r.axis));
  d["exact_moments"] = r.exact_moments;
  d["exact_mean"] = r.exact_mean;
  d["shot_moments"] = r.shot_moments;
  d["shot_mean"] = r.shot_mean;
  d["shot_sigma"] = r.shot_sigma;
  d["shots"] = r.shots;
  d["seconds"] = r.seconds;
  return d;
}

py::dict invariance_to_dict(const InvarianceRow& r) {
  py::dict d;
  d["h"] = r.h;
  d["law"] = law_name(r.law);
  d["degree"] = r.degree;
  d["samples_d"] = r.samples_d;
  d["samples_e"] = r.samples_e;
  d["closed_form_d"] = r.closed_form_d;
  d["closed_form_e"] = r.closed_form_e;
  d["ks_statistic"] = r.ks_statistic;
  d["p_value"] = r.p_value;
  d["critical_1pct"] = r.critical_1pct;
  d["reject_1pct"] = r.reject_1pct;
  return d;
}

}  // namespace

PYBIND11_MODULE(_degen, m) {
  m.doc() = "Exact diagonalization and degenerate-manifold ensembles for spin-1/2 models";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<Triangle>(m, "Triangle")
      .def_readonly("a", &Triangle::a)
      .def_readonly("b", &Triangle::b)
      .def_readonly("c", &Triangle::c)
      .def("__repr__", [](const Triangle& t) {
        return "Triangle(" + std::to_string(t.a) + ", " + std::to_string(t.b) + ", " +
               std::to_string(t.c) + ")";
      });

  py::class_<LatticeGeometry>(m, "Lattice")
      .def_readonly("n_sites", &LatticeGeometry::n_sites)
      .def_readonly("triangles", &LatticeGeometry::triangles)
      .def("bonds", [](const LatticeGeometry& g, int shell) {
        std::vector<std::pair<int, int>> out;
        for (const Bond& b : g.shell(shell)) out.emplace_back(b.i, b.j);
        return out;
      }, py::arg("shell") = 1)
      .def("positions", [](const LatticeGeometry& g) {
        std::vector<std::pair<double, double>> out;
        for (const Vec2& p : g.positions) out.emplace_back(p[0], p[1]);
        return out;
      });
  m.def("chain", &build_chain, py::arg("n"), py::arg("periodic") = true);
  m.def("triangular_supercell", &build_triangular_supercell, py::arg("a") = 3, py::arg("b") = 2);

  py::class_<HamiltonianTerms>(m, "Hamiltonian")
      .def_property_readonly("n_sites", &HamiltonianTerms::n_sites)
      .def_property_readonly("dimension", &HamiltonianTerms::dimension)
      .def("apply", py::overload_cast<const StateVector&>(&HamiltonianTerms::apply, py::const_),
           py::arg("state"), py::call_guard<py::gil_scoped_release>())
      .def("dense", &HamiltonianTerms::dense);
  m.def("ising", [](const LatticeGeometry& g, double J, double h) { return build_ising(g, J, h); },
        py::arg("lattice"), py::arg("J") = -1.0, py::arg("h") = 0.0);
  m.def("dmi", [](const LatticeGeometry& g, double J, double D, double h, const std::string& conv) {
        if (conv != "z_cross_u" && conv != "u_cross_z")
          throw ConfigError("convention must be 'z_cross_u' or 'u_cross_z'");
        return build_dmi(g, J, D, h,
                         conv == "z_cross_u" ? DmConvention::z_cross_u : DmConvention::u_cross_z);
      },
      py::arg("lattice"), py::arg("J") = -0.5, py::arg("D") = 1.0, py::arg("h") = 0.0,
      py::arg("convention") = "z_cross_u");

  m.def("lowest_eigenpairs",
        [](const HamiltonianTerms& H, int k, int block_size, double tol, int max_basis,
           int max_iterations, std::uint64_t seed) {
          SolverOptions o;
          o.k = k;
          o.block_size = block_size;
          o.tol = tol;
          o.max_basis = max_basis;
          o.max_iterations = max_iterations;
          o.seed = seed;
          EigenSolution s;
          {
            py::gil_scoped_release release;
            s = lowest_eigenpairs(H, o);
          }
          return py::make_tuple(s.energies, s.vectors, s.residual_norms);
        },
        py::arg("H"), py::arg("k") = 16, py::arg("block_size") = 8, py::arg("tol") = 1e-8,
        py::arg("max_basis") = 0, py::arg("max_iterations") = 2000, py::arg("seed") = 0x5eed,
        "Lowest k eigenpairs as (energies, vectors, residual_norms).");
  m.def("ground_multiplet_degree",
        [](const std::vector<double>& energies, std::optional<double> eps) {
          if (energies.empty()) throw std::invalid_argument("energies must be non-empty");
          const auto groups = group_multiplets(energies, eps.value_or(default_degeneracy_eps(energies[0])));
          return groups.front().degree;
        },
        py::arg("energies"), py::arg("eps") = py::none());

  m.def("sample_coefficients",
        [](int D, const std::string& law, std::uint64_t seed, std::uint64_t index) {
          return sample_coefficients(D, parse_law(law), seed, index);
        },
        py::arg("D"), py::arg("law") = "haar_gaussian", py::arg("seed") = 1, py::arg("index") = 0);
  m.def("ising_product_basis", &ising_product_basis, py::arg("n_sites"));
  m.def("fourier_remix", &fourier_remix, py::arg("basis"));
  m.def("closed_form_ising_entropy",
        [](Complex a0, Complex a1, const std::string& variant) {
          if (variant != "d" && variant != "e") throw ConfigError("variant must be 'd' or 'e'");
          return closed_form_ising_entropy(a0, a1, variant == "d" ? IsingVariant::d : IsingVariant::e);
        },
        py::arg("alpha0"), py::arg("alpha1"), py::arg("variant") = "d");

  m.def("entropy",
        [](const StateVector& state, std::vector<int> sites_a) {
          const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(state.size()))));
          return von_neumann_entropy(state, BipartitionMask(n, std::move(sites_a)));
        },
        py::arg("state"), py::arg("sites_a"), "Entanglement entropy in bits of subsystem A.");
  m.def("schmidt_spectrum",
        [](const StateVector& state, std::vector<int> sites_a) {
          const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(state.size()))));
          return reduced_spectrum(state, BipartitionMask(n, std::move(sites_a)));
        },
        py::arg("state"), py::arg("sites_a"));
  m.def("sample_entropies",
        [](const StateBlock& basis, std::vector<int> sites_a, int count, const std::string& law,
           std::uint64_t seed, int threads) {
          const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(basis.rows()))));
          const SubspaceEntropySampler sampler(basis, BipartitionMask(n, std::move(sites_a)));
          py::gil_scoped_release release;
          return sample_entropies(sampler, count, parse_law(law), seed, threads);
        },
        py::arg("basis"), py::arg("sites_a"), py::arg("count"), py::arg("law") = "haar_gaussian",
        py::arg("seed") = 1, py::arg("threads") = 1,
        "Entropies of random superpositions of the basis columns; sample i uses stream (seed, i).");

  m.def("degenerate_average",
        [](const StateBlock& states, const std::vector<std::pair<int, std::string>>& factors) {
          return degenerate_average(states, make_product(factors));
        },
        py::arg("states"), py::arg("factors"));
  m.def("ursell2", py::overload_cast<const StateBlock&, int, int>(&ursell2), py::arg("states"),
        py::arg("i"), py::arg("j"));
  m.def("ursell3",
        [](const StateBlock& states, int i, int j, int k, const std::string& form) {
          if (form != "literal" && form != "symmetric")
            throw ConfigError("form must be 'literal' or 'symmetric'");
          return ursell3(states, i, j, k,
                         form == "literal" ? UrsellForm::literal : UrsellForm::symmetric);
        },
        py::arg("states"), py::arg("i"), py::arg("j"), py::arg("k"), py::arg("form") = "literal");
  m.def("scalar_chirality", &scalar_chirality, py::arg("states"), py::arg("triangles"));
  m.def("local_moments",
        [](const StateBlock& states, const std::string& axis) {
          return local_moments(states, parse_axis(axis));
        },
        py::arg("states"), py::arg("axis") = "z");

  m.def("single_shot",
        [](const StateBlock& basis, long shots, const std::string& axis, std::uint64_t seed,
           int threads) {
          ShotOptions o;
          o.shots = shots;
          o.axis = parse_axis(axis);
          o.master_seed = seed;
          o.threads = threads;
          std::vector<MeasurementRecord> records;
          {
            py::gil_scoped_release release;
            records = single_shot_protocol(basis, o);
          }
          const std::vector<double> moments = estimate_magnetization(records);
          std::vector<std::string> bits;
          bits.reserve(records.size());
          for (auto& r : records) bits.push_back(std::move(r.bitstring));
          return py::make_tuple(bits, moments);
        },
        py::arg("basis"), py::arg("shots") = 8192, py::arg("axis") = "z", py::arg("seed") = 1,
        py::arg("threads") = 1,
        "One fresh ensemble member per shot; returns (bitstrings, per-site magnetization).");

  m.def("ks_two_sample",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          const stats::KsResult r = stats::ks_two_sample(a, b);
          py::dict d;
          d["statistic"] = r.statistic;
          d["p_value"] = r.p_value;
          d["critical_1pct"] = r.critical_1pct;
          d["reject_1pct"] = r.reject_1pct;
          return d;
        },
        py::arg("a"), py::arg("b"));

  m.def("validate_config", [](const std::string& text) { return config_to_json(validate_config(text)); },
        py::arg("json_text"), "Validates a sweep config and returns it with every default filled in.");
  m.def("run_sweep",
        [](const std::string& text, const std::string& out_dir, int threads) {
          const SweepConfig c = validate_config(text);
          SweepResult r;
          {
            py::gil_scoped_release release;
            r = run_sweep(c, out_dir, threads);
          }
          py::list points;
          for (const SweepRecord& p : r.points) points.append(record_to_dict(p));
          py::list invariance;
          for (const InvarianceRow& row : r.invariance) invariance.append(invariance_to_dict(row));
          py::dict d;
          d["points"] = points;
          d["invariance"] = invariance;
          d["any_failure"] = r.any_failure;
          return d;
        },
        py::arg("json_text"), py::arg("out_dir") = "", py::arg("threads") = 1);
}
