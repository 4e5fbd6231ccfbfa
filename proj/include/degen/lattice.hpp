// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_LATTICE_HPP
#define DEGEN_LATTICE_HPP

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace degen {

using Vec2 = std::array<double, 2>;

/// Neighbor pair with i > j. `unit` is the minimum-image displacement from
/// site j to site i, normalized to unit length.
struct Bond {
  int i = 0;
  int j = 0;
  int shell = 1;
  Vec2 unit{0.0, 0.0};
};

/// Counterclockwise site triple; all three edges are shell-1 bonds.
struct Triangle {
  int a = 0;
  int b = 0;
  int c = 0;
};

/// Finite periodic cluster. Immutable once built.
struct LatticeGeometry {
  int n_sites = 0;
  std::vector<Vec2> positions;
  std::vector<Bond> bonds;
  std::vector<Triangle> triangles;
  /// Periodic translations of the supercell; empty for chains.
  std::vector<Vec2> translation_vectors;
  bool is_chain = false;

  /// Bonds of one neighbor shell (1 = nearest, 2 = next-nearest).
  std::vector<Bond> shell(int shell_index) const;
  int degree(int site, int shell_index) const;
};

/// Chain with nearest-neighbor bonds. A periodic ring of n >= 3 sites has n
/// bonds; n = 2 keeps a single bond whether or not `periodic` is set.
LatticeGeometry build_chain(int n, bool periodic);

/// Triangular-lattice torus with translations T1 = a*a1 + b*a2 and
/// T2 = -b*a1 + (a+b)*a2, where a1 = (1, 0) and a2 = (1/2, sqrt(3)/2).
/// Holds N = a^2 + ab + b^2 sites, shells found by minimum image, and the
/// N upward-pointing triangles. Throws ConfigError when N < 7.
LatticeGeometry build_triangular_supercell(int a, int b);

/// Site permutation induced by translating every site by `shift` (which must
/// be a lattice vector). perm[s] is the image of site s.
std::vector<int> translation_permutation(const LatticeGeometry& geometry, const Vec2& shift);

/// JSON layout: {"n_sites", "positions": [[x, y]...],
/// "bonds": [[i, j, shell, [ux, uy]]...], "triangles": [[i, j, k]...]}.
/// Optional "translation_vectors" and "is_chain" are also understood.
LatticeGeometry geometry_from_json(const std::string& text);
LatticeGeometry load_geometry(const std::filesystem::path& path);
std::string geometry_to_json(const LatticeGeometry& geometry);

/// Throws ConfigError if bonds repeat, have i <= j, or triangles use
/// non-bonded or repeated edges.
void validate_geometry(const LatticeGeometry& geometry);

}  // namespace degen

#endif  // DEGEN_LATTICE_HPP
