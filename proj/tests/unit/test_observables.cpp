// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/ensemble.hpp"
#include "degen/lattice.hpp"
#include "degen/observables.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace degen;

namespace {

StateBlock orthonormal_block(int n, int D, std::uint64_t seed) {
  const auto dim = static_cast<Eigen::Index>(1) << n;
  StateBlock b(dim, D);
  for (int c = 0; c < D; ++c) b.col(c) = oracle::random_state(static_cast<std::size_t>(dim), seed + c);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, D);
}

Eigen::MatrixXcd dense_product(int n, const SpinProduct& p) {
  std::vector<std::pair<int, Eigen::MatrixXcd>> factors;
  for (const auto& [site, axis] : p.factors) factors.emplace_back(site, oracle::spin(axis));
  return oracle::product_operator(n, factors);
}

StateVector basis_state(int n, std::size_t index) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(1) << n);
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("spin products agree with dense operators") {
  const int n = 7;
  const StateVector psi = oracle::random_state(128, 5);
  const std::vector<SpinProduct> products = {
      {{{0, Axis::x}}},
      {{{3, Axis::y}}},
      {{{6, Axis::z}}},
      {{{1, Axis::x}, {4, Axis::y}}},
      {{{2, Axis::y}, {5, Axis::y}, {0, Axis::z}}},
      {{{6, Axis::x}, {0, Axis::y}, {3, Axis::z}}},
  };
  for (const SpinProduct& p : products) {
    const Complex exact = psi.dot(dense_product(n, p) * psi);
    CHECK(std::abs(expectation(psi, p) - exact) < 1e-13);
  }
  CHECK_THROWS(expectation(psi, {{{6, Axis::x}, {0, Axis::y}, {3, Axis::z}, {4, Axis::x}}}));
  CHECK_THROWS(expectation(psi, {{{1, Axis::x}, {1, Axis::y}}}));
}

TEST_CASE("degenerate averages equal the projector trace") {
  const int n = 8;
  for (int D : {1, 3, 6}) {
    const StateBlock states = orthonormal_block(n, D, 40 + D);
    const SpinProduct p{{{1, Axis::x}, {2, Axis::y}, {7, Axis::z}}};
    const double exact = oracle::projector_trace(states, dense_product(n, p));
    CHECK(std::abs(degenerate_average(states, p) - exact) < 1e-12);

    const ZCorrelations z(states);
    const double zz = oracle::projector_trace(states, dense_product(n, {{{0, Axis::z}, {5, Axis::z}}}));
    const double zzz = oracle::projector_trace(
        states, dense_product(n, {{{0, Axis::z}, {3, Axis::z}, {5, Axis::z}}}));
    CHECK(std::abs(z.szz(0, 5) - zz) < 1e-12);
    CHECK(std::abs(z.szzz(0, 3, 5) - zzz) < 1e-12);
    CHECK(std::abs(z.sz(4) - oracle::projector_trace(states, oracle::spin_op(n, 4, Axis::z))) <
          1e-12);
  }
}

TEST_CASE("averages do not depend on the basis of the multiplet") {
  const int n = 6;
  const StateBlock states = orthonormal_block(n, 4, 77);
  const StateBlock remixed = fourier_remix(states);
  const std::vector<Triangle> tri = {{0, 1, 2}, {3, 4, 5}};
  CHECK(std::abs(scalar_chirality(states, tri) - scalar_chirality(remixed, tri)) < 1e-12);
  CHECK(std::abs(ursell3(states, 0, 2, 4) - ursell3(remixed, 0, 2, 4)) < 1e-12);
  CHECK(std::abs(ursell2(states, 1, 5) - ursell2(remixed, 1, 5)) < 1e-12);
}

TEST_CASE("pair cumulants of reference states") {
  const int n = 2;
  const StateVector up_up = basis_state(n, 0);
  CHECK(ursell2(StateBlock(up_up), 0, 1) == doctest::Approx(0.0));
  const StateVector ghz = (basis_state(n, 0) + basis_state(n, 3)) / std::sqrt(2.0);
  CHECK(ursell2(StateBlock(ghz), 0, 1) == doctest::Approx(0.25));
  const StateVector singlet = (basis_state(n, 1) - basis_state(n, 2)) / std::sqrt(2.0);
  CHECK(ursell2(StateBlock(singlet), 0, 1) == doctest::Approx(-0.25));
  CHECK_THROWS(ursell2(StateBlock(singlet), 1, 1));
}

TEST_CASE("triple cumulants of reference states") {
  const int n = 3;
  const StateVector product = basis_state(n, 5);
  for (UrsellForm f : {UrsellForm::literal, UrsellForm::symmetric}) {
    CHECK(ursell3(StateBlock(product), 0, 1, 2, f) == doctest::Approx(0.0));
    const StateVector ghz = (basis_state(n, 0) + basis_state(n, 7)) / std::sqrt(2.0);
    CHECK(ursell3(StateBlock(ghz), 0, 1, 2, f) == doctest::Approx(0.0));
    // One spin up among three downs (bit set means down).
    const StateVector w = (basis_state(n, 6) + basis_state(n, 5) + basis_state(n, 3)) / std::sqrt(3.0);
    CHECK(ursell3(StateBlock(w), 0, 1, 2, f) == doctest::Approx(2.0 / 27.0).epsilon(1e-12));
  }
  // For a state that is not permutation symmetric the two forms differ.
  const StateVector tilted = (0.6 * basis_state(n, 0) + 0.8 * basis_state(n, 1));
  const ZCorrelations z{StateBlock(tilted)};
  const double sym = z.szzz(0, 1, 2) - z.sz(0) * z.szz(1, 2) - z.sz(1) * z.szz(0, 2) -
                     z.sz(2) * z.szz(0, 1) + 2.0 * z.sz(0) * z.sz(1) * z.sz(2);
  CHECK(ursell3(z, 0, 1, 2, UrsellForm::symmetric) == doctest::Approx(sym));
}

TEST_CASE("triangle chirality") {
  const int n = 3;
  const Eigen::MatrixXcd chi = oracle::chirality_operator(n, 0, 1, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(chi);
  CHECK(es.eigenvalues()[7] == doctest::Approx(std::sqrt(3.0) / 4.0));
  const StateBlock top = es.eigenvectors().col(7);
  CHECK(triangle_chirality(top, {0, 1, 2}) == doctest::Approx(std::sqrt(3.0) / 4.0));
  CHECK(triangle_chirality(top, {0, 2, 1}) == doctest::Approx(-std::sqrt(3.0) / 4.0));
  CHECK(triangle_chirality(top, {1, 2, 0}) == doctest::Approx(std::sqrt(3.0) / 4.0));

  const int m = 7;
  const StateBlock states = orthonormal_block(m, 3, 9);
  const Triangle t{6, 2, 4};
  const double exact = oracle::projector_trace(states, oracle::chirality_operator(m, 6, 2, 4));
  CHECK(std::abs(triangle_chirality(states, t) - exact) < 1e-12);

  const std::vector<Triangle> tris = {{0, 1, 2}, {6, 2, 4}, {3, 5, 1}};
  double mean = 0.0;
  for (const Triangle& tr : tris)
    mean += oracle::projector_trace(states, oracle::chirality_operator(m, tr.a, tr.b, tr.c)) / 3.0;
  CHECK(std::abs(scalar_chirality(states, tris) - 3.0 / std::numbers::pi * mean) < 1e-12);
  CHECK_THROWS(scalar_chirality(states, {}));
  CHECK_THROWS(triangle_chirality(states, {1, 1, 2}));
}

TEST_CASE("shell and triangle averages") {
  const LatticeGeometry g = build_triangular_supercell(2, 1);
  const StateBlock states = orthonormal_block(g.n_sites, 2, 31);
  const ZCorrelations z(states);
  double sum = 0.0;
  int count = 0;
  for (const Bond& b : g.bonds)
    if (b.shell == 1) {
      sum += ursell2(z, b.i, b.j);
      ++count;
    }
  CHECK(shell_ursell2(z, g, 1) == doctest::Approx(sum / count));
  CHECK(std::isnan(shell_ursell2(z, g, 7)));
  double tsum = 0.0;
  for (const Triangle& t : g.triangles) tsum += ursell3(z, t.a, t.b, t.c);
  CHECK(triangle_ursell3(z, g) == doctest::Approx(tsum / static_cast<double>(g.triangles.size())));

  const std::vector<double> mx = local_moments(states, Axis::x);
  CHECK(mx.size() == static_cast<std::size_t>(g.n_sites));
  CHECK(std::abs(mx[2] - oracle::projector_trace(states, oracle::spin_op(g.n_sites, 2, Axis::x))) <
        1e-12);
}
