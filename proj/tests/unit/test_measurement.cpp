// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/eigensolver.hpp"
#include "degen/ensemble.hpp"
#include "degen/hamiltonian.hpp"
#include "degen/lattice.hpp"
#include "degen/measurement.hpp"
#include "degen/observables.hpp"
#include "degen/stats.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

using namespace degen;

namespace {

StateVector basis_state(int n, std::size_t index) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(1) << n);
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return v;
}

// Largest |estimate - exact| in units of the binomial standard error.
double worst_z_score(const std::vector<double>& estimate, const std::vector<double>& exact,
                     long shots) {
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double p = std::clamp(0.5 + exact[i], 1e-6, 1.0 - 1e-6);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    worst = std::max(worst, std::abs(estimate[i] - exact[i]) / sigma);
  }
  return worst;
}

}  // namespace

TEST_CASE("basis rotations map spin eigenstates to the computational basis") {
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::spin(axis));
    // Column 1 is the +1/2 eigenvector.
    const Eigen::VectorXcd plus = es.eigenvectors().col(1);
    const Eigen::VectorXcd minus = es.eigenvectors().col(0);
    // Site 0 in |+>, site 1 in |->, site 2 in |+>.
    StateVector psi = oracle::kron(plus, oracle::kron(minus, plus));
    const StateVector r = rotate_basis(psi, axis);
    CHECK(std::abs(std::abs(r[2]) - 1.0) < 1e-14);
    CHECK((rotate_basis(r, axis, true) - psi).norm() < 1e-14);
  }
  const StateVector psi = oracle::random_state(64, 3);
  for (Axis axis : {Axis::x, Axis::y}) {
    const StateVector r = rotate_basis(psi, axis);
    CHECK(std::abs(r.norm() - 1.0) < 1e-14);
    // <S^axis_i> before rotation equals <S^z_i> after.
    for (int i = 0; i < 6; ++i) {
      const Complex before = psi.dot(oracle::spin_op(6, i, axis) * psi);
      const Complex after = r.dot(oracle::spin_op(6, i, Axis::z) * r);
      CHECK(std::abs(before - after) < 1e-13);
    }
  }
  StateBlock block(64, 2);
  block.col(0) = psi;
  block.col(1) = oracle::random_state(64, 4);
  const StateBlock rb = rotate_basis(block, Axis::y);
  CHECK((rb.col(1) - rotate_basis(StateVector(block.col(1)), Axis::y)).norm() < 1e-15);
}

TEST_CASE("Born sampling frequencies") {
  const int n = 4;
  const StateVector ghz = (basis_state(n, 0) + basis_state(n, 15)) / std::sqrt(2.0);
  RngStream rng(12, 0, StreamTag::shot);
  std::map<std::string, int> counts;
  const int shots = 20000;
  for (int s = 0; s < shots; ++s) ++counts[sample_bitstring(ghz, rng).bitstring];
  CHECK(counts.size() == 2);
  CHECK(counts.count("0000") == 1);
  CHECK(counts.count("1111") == 1);
  const double f = counts["0000"] / static_cast<double>(shots);
  CHECK(std::abs(f - 0.5) < 3.0 * std::sqrt(0.25 / shots));

  // Bit i of the index is site i.
  RngStream det(1, 0, StreamTag::shot);
  CHECK(sample_bitstring(basis_state(n, 0b0010), det).bitstring == "0100");
  CHECK_THROWS_AS(sample_bitstring(2.0 * ghz, det), std::invalid_argument);
}

TEST_CASE("protocol is deterministic and thread independent") {
  const StateBlock basis = ising_product_basis(5);
  ShotOptions o;
  o.shots = 300;
  o.axis = Axis::x;
  o.master_seed = 99;
  const auto a = single_shot_protocol(basis, o);
  o.threads = 3;
  const auto b = single_shot_protocol(basis, o);
  REQUIRE(a.size() == 300);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].shot_index == static_cast<long>(i));
    CHECK(a[i].bitstring == b[i].bitstring);
    CHECK(a[i].axis == Axis::x);
  }
  o.master_seed = 100;
  const auto c = single_shot_protocol(basis, o);
  int differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a[i].bitstring != c[i].bitstring;
  CHECK(differ > 0);

  o.reuse = 4;
  o.shots = 10;
  CHECK(single_shot_protocol(basis, o).size() == 10);
  o.shots = 0;
  CHECK_THROWS(single_shot_protocol(basis, o));
}

TEST_CASE("tally and magnetization estimate") {
  const std::vector<MeasurementRecord> r = {
      {0, Axis::z, "001"}, {1, Axis::z, "011"}, {2, Axis::z, "000"}, {3, Axis::z, "001"}};
  const MeasurementTally t = tally(r);
  CHECK(t.shots == 4);
  CHECK(t.up == std::vector<long>{4, 3, 1});
  CHECK(t.down == std::vector<long>{0, 1, 3});
  const std::vector<double> m = estimate_magnetization(r);
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.25));
  CHECK(m[2] == doctest::Approx(-0.25));
  CHECK_THROWS(estimate_magnetization({}));
}

TEST_CASE("records round trip through a file") {
  const auto path = std::filesystem::temp_directory_path() / "degen_records_test.txt";
  const std::vector<MeasurementRecord> r = {{0, Axis::x, "0101"}, {7, Axis::y, "1110"}};
  write_records(path, r);
  const auto back = read_records(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].shot_index == 7);
  CHECK(back[1].axis == Axis::y);
  CHECK(back[1].bitstring == "1110");
  {
    std::ofstream bad(path);
    bad << "0,q,0101\n";
  }
  CHECK_THROWS(read_records(path));
  std::filesystem::remove(path);
}

TEST_CASE("single-shot estimate in a polarizing transverse field") {
  const int n = 8;
  const HamiltonianTerms H = build_ising(build_chain(n, true), -1.0, 2.0);
  SolverOptions so;
  so.k = 4;
  const EigenSolution sol = lowest_eigenpairs(H, so);
  const StateBlock ground = sol.vectors.leftCols(1);
  const std::vector<double> exact = local_moments(ground, Axis::x);
  ShotOptions o;
  o.shots = 8192;
  o.axis = Axis::x;
  o.master_seed = 5;
  const auto est = estimate_magnetization(single_shot_protocol(ground, o));
  CHECK(worst_z_score(est, exact, o.shots) < 3.5);
  // The field points along +x with h > 0, so the moments are negative.
  CHECK(exact[0] < -0.4);
}

TEST_CASE("estimates are unbiased over the degenerate ensemble") {
  // A random two-dimensional subspace of eight sites; the ensemble-averaged
  // Born distribution is that of the normalized projector.
  const int n = 8;
  const Eigen::Index dim = 256;
  StateBlock basis(dim, 2);
  basis.col(0) = oracle::random_state(dim, 8);
  basis.col(1) = oracle::random_state(dim, 9);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  basis = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, 2);
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    const std::vector<double> exact = local_moments(basis, axis);
    double exact_mean = 0.0;
    for (double m : exact) exact_mean += m / n;
    std::vector<double> run_means;
    for (std::uint64_t run = 0; run < 64; ++run) {
      ShotOptions o;
      o.shots = 8192;
      o.axis = axis;
      o.master_seed = 1000 + run;
      const auto est = estimate_magnetization(single_shot_protocol(basis, o));
      double mean = 0.0;
      for (double m : est) mean += m / n;
      run_means.push_back(mean);
    }
    const stats::MeanStd ms = stats::mean_std(run_means);
    CHECK(std::abs(ms.mean - exact_mean) < 4.0 * ms.standard_error);

    ShotOptions o;
    o.shots = 8192;
    o.axis = axis;
    o.master_seed = 31;
    const auto remixed = estimate_magnetization(single_shot_protocol(fourier_remix(basis), o));
    CHECK(worst_z_score(remixed, exact, o.shots) < 4.0);
  }
}
