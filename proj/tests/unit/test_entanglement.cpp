// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/ensemble.hpp"
#include "degen/entanglement.hpp"
#include "degen/lattice.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace degen;

TEST_CASE("bipartition masks") {
  const BipartitionMask m(6, {4, 1});
  CHECK(m.sites_a() == std::vector<int>{4, 1});
  CHECK(m.sites_b() == std::vector<int>{0, 2, 3, 5});
  CHECK(m.complement().sites_a() == std::vector<int>{0, 2, 3, 5});
  CHECK(BipartitionMask::half_chain(7).sites_a() == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(BipartitionMask(4, {}), ConfigError);
  CHECK_THROWS_AS(BipartitionMask(4, {0, 1, 2, 3}), ConfigError);
  CHECK_THROWS_AS(BipartitionMask(4, {0, 0}), ConfigError);
  CHECK_THROWS_AS(BipartitionMask(4, {4}), ConfigError);
  CHECK_THROWS_AS(BipartitionMask(4, {-1}), ConfigError);

  const LatticeGeometry g = build_triangular_supercell(3, 2);
  const BipartitionMask half = BipartitionMask::geometric_half(g);
  CHECK(half.sites_a().size() == 9);
  double max_a = -1e300, min_b = 1e300;
  for (int s : half.sites_a()) max_a = std::max(max_a, g.positions[s][0]);
  for (int s : half.sites_b()) min_b = std::min(min_b, g.positions[s][0]);
  CHECK(max_a <= min_b + 1e-12);
}

TEST_CASE("product and cat states") {
  const int n = 6;
  const BipartitionMask m = BipartitionMask::half_chain(n);
  const StateBlock basis = ising_product_basis(n);
  CHECK(von_neumann_entropy(basis.col(0), m) == doctest::Approx(0.0).epsilon(1e-14));
  const StateVector cat = (basis.col(0) + basis.col(1)) / std::sqrt(2.0);
  CHECK(von_neumann_entropy(cat, m) == doctest::Approx(1.0).epsilon(1e-14));
  const SchmidtSpectrum w = reduced_spectrum(cat, m);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
  CHECK(w.size() == 8);

  StateVector tilted = 0.8 * basis.col(0) + Complex(0.0, 0.6) * basis.col(1);
  CHECK(von_neumann_entropy(tilted, m) == doctest::Approx(binary_entropy(0.64)).epsilon(1e-13));
}

TEST_CASE("spectrum agrees with an explicit partial trace") {
  const int n = 8;
  const std::vector<std::vector<int>> masks = {{0, 2, 5}, {0, 1, 2, 3}, {7}, {1, 3, 4, 6, 7}};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const StateVector psi = oracle::random_state(std::size_t{1} << n, seed);
    for (const auto& sites : masks) {
      const BipartitionMask m(n, sites);
      const Eigen::MatrixXcd rho = oracle::partial_trace(psi, n, m.sites_a());
      const Eigen::VectorXd exact = oracle::dense_eigenvalues(rho).reverse();
      const SchmidtSpectrum w = reduced_spectrum(psi, m);
      for (Eigen::Index i = 0; i < exact.size(); ++i) {
        const double wi = i < static_cast<Eigen::Index>(w.size()) ? w[i] : 0.0;
        CHECK(std::abs(wi - std::max(exact[i], 0.0)) < 1e-10);
      }
      CHECK(std::abs(von_neumann_entropy(psi, m) - oracle::entropy_from_rho(rho)) < 1e-10);
      CHECK(std::abs(von_neumann_entropy(psi, m) - von_neumann_entropy(psi, m.complement())) <
            1e-10);
    }
  }
}

TEST_CASE("local unitaries leave the entropy unchanged") {
  const int n = 6;
  const BipartitionMask m(n, {0, 3, 4});
  const StateVector psi = oracle::random_state(64, 17);
  Eigen::MatrixXcd u(2, 2);
  const double c = std::cos(0.7), s = std::sin(0.7);
  u << c, Complex(0.0, s), Complex(0.0, s), c;
  Eigen::MatrixXcd local = Eigen::MatrixXcd::Identity(64, 64);
  for (int site : {0, 2, 5}) local = oracle::site_operator(n, site, u) * local;
  const StateVector rotated = local * psi;
  CHECK(std::abs(von_neumann_entropy(psi, m) - von_neumann_entropy(rotated, m)) < 1e-12);
}

TEST_CASE("entropy statistics") {
  const std::vector<double> s = {0.0, 0.25, 0.5, 0.75, 1.0, 1.0};
  const EntropyStatistics st = summarize_entropies(s, 1.0, 4);
  CHECK(st.sample_count == 6);
  CHECK(st.mean == doctest::Approx(3.5 / 6.0));
  CHECK(st.bin_edges.size() == 5);
  CHECK(st.probabilities.size() == 4);
  double total = 0.0;
  for (double p : st.probabilities) total += p;
  CHECK(total == doctest::Approx(1.0));
  CHECK(st.probabilities.back() == doctest::Approx(3.0 / 6.0));
  CHECK(entropy_bits(std::vector<double>{0.5, 0.5, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("subspace sampler matches direct evaluation") {
  const int n = 8;
  StateBlock basis(256, 5);
  for (int c = 0; c < 5; ++c) basis.col(c) = oracle::random_state(256, 100 + c);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  basis = qr.householderQ() * Eigen::MatrixXcd::Identity(256, 5);
  const BipartitionMask m(n, {1, 2, 6, 7});
  const SubspaceEntropySampler sampler(basis, m);
  CHECK(sampler.degree() == 5);
  CHECK(sampler.rank() <= 16);
  CHECK(sampler.discarded_weight() < 1e-12);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const CoefficientVector a = sample_coefficients(5, CoefficientLaw::haar_gaussian, 3, i);
    const StateVector psi = superpose(basis, a);
    CHECK(std::abs(sampler.entropy(a) - von_neumann_entropy(psi, m)) < 1e-10);
  }

  const std::vector<double> serial = sample_entropies(sampler, 64, CoefficientLaw::haar_gaussian, 9, 1);
  const std::vector<double> threaded = sample_entropies(sampler, 64, CoefficientLaw::haar_gaussian, 9, 3);
  CHECK(serial == threaded);
  CHECK(serial[5] == sampler.entropy(sample_coefficients(5, CoefficientLaw::haar_gaussian, 9, 5)));
}

TEST_CASE("sampler on the cat pair reproduces the closed form") {
  const int n = 6;
  const StateBlock basis = ising_product_basis(n);
  const SubspaceEntropySampler sampler(basis, BipartitionMask::half_chain(n));
  for (std::uint64_t i = 0; i < 20; ++i) {
    const CoefficientVector a = sample_coefficients(2, CoefficientLaw::haar_gaussian, 4, i);
    CHECK(std::abs(sampler.entropy(a) - closed_form_ising_entropy(a[0], a[1], IsingVariant::d)) <
          1e-12);
  }
}
