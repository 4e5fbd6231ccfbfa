// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/lattice.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace degen;

namespace {

std::set<std::pair<int, int>> bond_set(const LatticeGeometry& g, int shell) {
  std::set<std::pair<int, int>> out;
  for (const Bond& b : g.bonds)
    if (b.shell == shell) out.insert({b.i, b.j});
  return out;
}

// Minimum-image displacement from j to i.
Vec2 displacement(const LatticeGeometry& g, int i, int j) {
  Vec2 best{0, 0};
  double best_d = 1e300;
  const auto& t = g.translation_vectors;
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q) {
      const double dx = g.positions[i][0] - g.positions[j][0] + p * t[0][0] + q * t[1][0];
      const double dy = g.positions[i][1] - g.positions[j][1] + p * t[0][1] + q * t[1][1];
      if (dx * dx + dy * dy < best_d) {
        best_d = dx * dx + dy * dy;
        best = {dx, dy};
      }
    }
  return best;
}

}  // namespace

TEST_CASE("periodic chains") {
  const LatticeGeometry ring = build_chain(16, true);
  CHECK(ring.bonds.size() == 16);
  for (int s = 0; s < 16; ++s) CHECK(ring.degree(s, 1) == 2);
  CHECK(build_chain(2, true).bonds.size() == 1);
  CHECK(build_chain(1, true).bonds.empty());
  CHECK(build_chain(5, false).bonds.size() == 4);
  CHECK(ring.translation_vectors.empty());
  for (const Bond& b : ring.bonds) CHECK(b.i > b.j);
  CHECK_THROWS_AS(build_chain(0, true), ConfigError);
}

TEST_CASE("19-site supercell matches brute-force minimum image") {
  const LatticeGeometry g = build_triangular_supercell(3, 2);
  REQUIRE(g.n_sites == 19);
  CHECK(g.shell(1).size() == 57);
  CHECK(g.triangles.size() == 19);

  std::set<std::pair<int, int>> oracle1, oracle2;
  for (const auto& [i, j, s] : oracle::brute_force_shells(g)) (s == 1 ? oracle1 : oracle2).insert({i, j});
  CHECK(bond_set(g, 1) == oracle1);
  CHECK(bond_set(g, 2) == oracle2);

  int degree_sum = 0;
  for (int s = 0; s < g.n_sites; ++s) {
    CHECK(g.degree(s, 1) == 6);
    CHECK(g.degree(s, 2) == 6);
    degree_sum += g.degree(s, 1);
  }
  CHECK(degree_sum == 2 * static_cast<int>(g.shell(1).size()));

  // The shell-1 displacement set of every site is the six unit vectors.
  for (int s = 0; s < g.n_sites; ++s) {
    std::set<std::pair<long, long>> dirs;
    for (const Bond& b : g.shell(1)) {
      if (b.i != s && b.j != s) continue;
      const int other = b.i == s ? b.j : b.i;
      const Vec2 d = displacement(g, other, s);
      CHECK(std::hypot(d[0], d[1]) == doctest::Approx(1.0));
      const double angle = std::atan2(d[1], d[0]) * 180.0 / M_PI;
      dirs.insert({std::lround(angle), 0});
    }
    CHECK(dirs == std::set<std::pair<long, long>>{{-120, 0}, {-60, 0}, {0, 0}, {60, 0}, {120, 0}, {180, 0}});
  }

  // Stored unit vectors point from j to i.
  for (const Bond& b : g.shell(1)) {
    const Vec2 d = displacement(g, b.i, b.j);
    CHECK(b.unit[0] == doctest::Approx(d[0]));
    CHECK(b.unit[1] == doctest::Approx(d[1]));
  }
}

TEST_CASE("supercell triangles are counterclockwise and edge-disjoint") {
  const LatticeGeometry g = build_triangular_supercell(3, 2);
  const auto nn = bond_set(g, 1);
  std::map<std::pair<int, int>, int> uses;
  for (const Triangle& t : g.triangles) {
    for (auto [x, y] : {std::pair{t.a, t.b}, std::pair{t.b, t.c}, std::pair{t.c, t.a}}) {
      const std::pair<int, int> e{std::max(x, y), std::min(x, y)};
      CHECK(nn.count(e) == 1);
      ++uses[e];
    }
    const Vec2 ab = displacement(g, t.b, t.a);
    const Vec2 ac = displacement(g, t.c, t.a);
    CHECK(ab[0] * ac[1] - ab[1] * ac[0] > 0.0);
  }
  for (const auto& [edge, count] : uses) CHECK(count == 1);
  CHECK_NOTHROW(validate_geometry(g));
}

TEST_CASE("bonds are closed under supercell translations") {
  const LatticeGeometry g = build_triangular_supercell(3, 2);
  const auto nn = bond_set(g, 1);
  const auto nnn = bond_set(g, 2);
  for (const Vec2& shift : {Vec2{1.0, 0.0}, Vec2{0.5, std::sqrt(3.0) / 2}}) {
    const std::vector<int> perm = translation_permutation(g, shift);
    std::set<int> image(perm.begin(), perm.end());
    CHECK(image.size() == 19);
    for (const auto& [i, j] : nn) CHECK(nn.count({std::max(perm[i], perm[j]), std::min(perm[i], perm[j])}) == 1);
    for (const auto& [i, j] : nnn) CHECK(nnn.count({std::max(perm[i], perm[j]), std::min(perm[i], perm[j])}) == 1);
  }
  CHECK_THROWS_AS(translation_permutation(g, {0.3, 0.0}), ConfigError);
}

TEST_CASE("small supercells are rejected") {
  CHECK_THROWS_AS(build_triangular_supercell(2, 0), ConfigError);
  CHECK_THROWS_AS(build_triangular_supercell(1, 1), ConfigError);
  const LatticeGeometry g7 = build_triangular_supercell(2, 1);
  CHECK(g7.n_sites == 7);
  CHECK(g7.shell(1).size() == 21);
}

TEST_CASE("geometry JSON round trip and validation") {
  const LatticeGeometry g = build_triangular_supercell(3, 2);
  const LatticeGeometry back = geometry_from_json(geometry_to_json(g));
  CHECK(back.n_sites == g.n_sites);
  CHECK(back.bonds.size() == g.bonds.size());
  CHECK(back.triangles.size() == g.triangles.size());
  CHECK(bond_set(back, 1) == bond_set(g, 1));

  CHECK_THROWS_AS(geometry_from_json("{\"n_sites\": 2, \"positions\": [[0,0],[1,0]], "
                                     "\"bonds\": [[0, 1, 1, [1, 0]]], \"triangles\": []}"),
                  ConfigError);
  CHECK_THROWS_AS(geometry_from_json("{\"n_sites\": 2, \"positions\": [[0,0],[1,0]], "
                                     "\"bonds\": [[1, 0, 1, [1, 0]], [1, 0, 1, [1, 0]]], "
                                     "\"triangles\": []}"),
                  ConfigError);
  CHECK_THROWS_AS(geometry_from_json("not json"), ConfigError);
}
