// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/lattice.hpp"

#include "degen/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace degen {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// Triangular lattice point m*a1 + n*a2 in integer coordinates.
struct LatticePoint {
  long m = 0;
  long n = 0;
};

Vec2 to_cartesian(long m, long n) {
  return {static_cast<double>(m) + 0.5 * static_cast<double>(n),
          0.5 * kSqrt3 * static_cast<double>(n)};
}

long norm2(long m, long n) { return m * m + m * n + n * n; }

long floor_mod(long x, long modulus) {
  const long r = x % modulus;
  return r < 0 ? r + modulus : r;
}

// Coset label of a lattice point modulo the superlattice spanned by
// T1 = (a, b) and T2 = (-b, a + b).
struct CosetKey {
  long u = 0;
  long v = 0;
  auto operator<=>(const CosetKey&) const = default;
};

CosetKey coset_key(long m, long n, long a, long b, long cells) {
  return {floor_mod((a + b) * m + b * n, cells), floor_mod(-b * m + a * n, cells)};
}

std::uint64_t pair_key(int i, int j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

Vec2 normalized(const Vec2& v) {
  const double len = std::hypot(v[0], v[1]);
  return {v[0] / len, v[1] / len};
}

}  // namespace

std::vector<Bond> LatticeGeometry::shell(int shell_index) const {
  std::vector<Bond> out;
  for (const Bond& bond : bonds) {
    if (bond.shell == shell_index) out.push_back(bond);
  }
  return out;
}

int LatticeGeometry::degree(int site, int shell_index) const {
  int count = 0;
  for (const Bond& bond : bonds) {
    if (bond.shell == shell_index && (bond.i == site || bond.j == site)) ++count;
  }
  return count;
}

LatticeGeometry build_chain(int n, bool periodic) {
  if (n < 1) throw ConfigError("build_chain: site count must be >= 1");
  LatticeGeometry geometry;
  geometry.n_sites = n;
  geometry.is_chain = true;
  for (int s = 0; s < n; ++s) geometry.positions.push_back({static_cast<double>(s), 0.0});
  for (int s = 0; s + 1 < n; ++s) geometry.bonds.push_back({s + 1, s, 1, {1.0, 0.0}});
  if (periodic && n >= 3) {
    // Minimum image of site n-1 seen from site 0 sits at x = -1.
    geometry.bonds.push_back({n - 1, 0, 1, {-1.0, 0.0}});
  }
  return geometry;
}

LatticeGeometry build_triangular_supercell(int a, int b) {
  const long la = a;
  const long lb = b;
  const long cells = la * la + la * lb + lb * lb;
  if (cells < 7) {
    throw ConfigError("build_triangular_supercell: a^2 + ab + b^2 = " + std::to_string(cells) +
                      " < 7 makes minimum-image neighbors ambiguous");
  }

  // One representative per coset: the lattice point closest to the origin,
  // ties broken lexicographically so the choice is deterministic.
  std::map<CosetKey, LatticePoint> representative;
  const long range = cells;
  for (long m = -range; m <= range; ++m) {
    for (long n = -range; n <= range; ++n) {
      const CosetKey key = coset_key(m, n, la, lb, cells);
      auto it = representative.find(key);
      if (it == representative.end()) {
        representative.emplace(key, LatticePoint{m, n});
        continue;
      }
      const LatticePoint& old = it->second;
      if (std::make_tuple(norm2(m, n), m, n) < std::make_tuple(norm2(old.m, old.n), old.m, old.n)) {
        it->second = {m, n};
      }
    }
  }

  std::vector<LatticePoint> points;
  for (const auto& [key, point] : representative) points.push_back(point);
  // Rows bottom to top, left to right within a row.
  std::sort(points.begin(), points.end(), [](const LatticePoint& p, const LatticePoint& q) {
    return std::make_tuple(p.n, p.m) < std::make_tuple(q.n, q.m);
  });

  std::map<CosetKey, int> index_of;
  for (std::size_t s = 0; s < points.size(); ++s) {
    index_of[coset_key(points[s].m, points[s].n, la, lb, cells)] = static_cast<int>(s);
  }

  LatticeGeometry geometry;
  geometry.n_sites = static_cast<int>(points.size());
  for (const LatticePoint& p : points) geometry.positions.push_back(to_cartesian(p.m, p.n));
  geometry.translation_vectors = {to_cartesian(la, lb), to_cartesian(-lb, la + lb)};

  for (int i = 0; i < geometry.n_sites; ++i) {
    for (int j = 0; j < i; ++j) {
      const long dm = points[i].m - points[j].m;
      const long dn = points[i].n - points[j].n;
      long best = -1;
      int best_count = 0;
      LatticePoint best_image;
      for (long p = -2; p <= 2; ++p) {
        for (long q = -2; q <= 2; ++q) {
          const long im = dm + p * la - q * lb;
          const long in = dn + p * lb + q * (la + lb);
          const long d2 = norm2(im, in);
          if (best < 0 || d2 < best) {
            best = d2;
            best_count = 1;
            best_image = {im, in};
          } else if (d2 == best) {
            ++best_count;
          }
        }
      }
      int shell = 0;
      if (best == 1) shell = 1;
      if (best == 3) shell = 2;
      if (shell == 0) continue;
      if (best_count > 1) {
        throw ConfigError("build_triangular_supercell: ambiguous minimum image for sites " +
                          std::to_string(i) + " and " + std::to_string(j));
      }
      geometry.bonds.push_back({i, j, shell, normalized(to_cartesian(best_image.m, best_image.n))});
    }
  }

  for (std::size_t s = 0; s < points.size(); ++s) {
    const LatticePoint& p = points[s];
    geometry.triangles.push_back({static_cast<int>(s),
                                  index_of.at(coset_key(p.m + 1, p.n, la, lb, cells)),
                                  index_of.at(coset_key(p.m, p.n + 1, la, lb, cells))});
  }
  return geometry;
}

std::vector<int> translation_permutation(const LatticeGeometry& geometry, const Vec2& shift) {
  if (geometry.translation_vectors.size() != 2) {
    throw ConfigError("translation_permutation: geometry has no periodic translations");
  }
  const Vec2& t1 = geometry.translation_vectors[0];
  const Vec2& t2 = geometry.translation_vectors[1];
  const double det = t1[0] * t2[1] - t1[1] * t2[0];
  auto is_superlattice_vector = [&](double dx, double dy) {
    const double p = (dx * t2[1] - dy * t2[0]) / det;
    const double q = (t1[0] * dy - t1[1] * dx) / det;
    return std::abs(p - std::round(p)) < 1e-9 && std::abs(q - std::round(q)) < 1e-9;
  };

  std::vector<int> perm(static_cast<std::size_t>(geometry.n_sites), -1);
  for (int s = 0; s < geometry.n_sites; ++s) {
    const double x = geometry.positions[s][0] + shift[0];
    const double y = geometry.positions[s][1] + shift[1];
    for (int t = 0; t < geometry.n_sites; ++t) {
      if (is_superlattice_vector(x - geometry.positions[t][0], y - geometry.positions[t][1])) {
        perm[s] = t;
        break;
      }
    }
    if (perm[s] < 0) throw ConfigError("translation_permutation: shift is not a lattice vector");
  }
  return perm;
}

void validate_geometry(const LatticeGeometry& geometry) {
  if (geometry.n_sites < 1) throw ConfigError("geometry: n_sites must be >= 1");
  if (static_cast<int>(geometry.positions.size()) != geometry.n_sites) {
    throw ConfigError("geometry: positions must list one entry per site");
  }
  std::set<std::uint64_t> seen;
  std::set<std::uint64_t> nearest;
  for (const Bond& bond : geometry.bonds) {
    if (bond.i <= bond.j || bond.j < 0 || bond.i >= geometry.n_sites) {
      throw ConfigError("geometry: bond (" + std::to_string(bond.i) + ", " +
                        std::to_string(bond.j) + ") must satisfy n_sites > i > j >= 0");
    }
    if (bond.shell < 1) throw ConfigError("geometry: bond shell must be >= 1");
    if (!seen.insert(pair_key(bond.i, bond.j)).second) {
      throw ConfigError("geometry: bond (" + std::to_string(bond.i) + ", " +
                        std::to_string(bond.j) + ") listed twice");
    }
    if (bond.shell == 1) nearest.insert(pair_key(bond.i, bond.j));
  }
  std::set<std::uint64_t> used_edges;
  for (const Triangle& tri : geometry.triangles) {
    const std::array<int, 3> v{tri.a, tri.b, tri.c};
    for (int s : v) {
      if (s < 0 || s >= geometry.n_sites) throw ConfigError("geometry: triangle site out of range");
    }
    if (tri.a == tri.b || tri.b == tri.c || tri.a == tri.c) {
      throw ConfigError("geometry: triangle repeats a site");
    }
    for (int e = 0; e < 3; ++e) {
      const int p = std::max(v[e], v[(e + 1) % 3]);
      const int q = std::min(v[e], v[(e + 1) % 3]);
      if (!nearest.contains(pair_key(p, q))) {
        throw ConfigError("geometry: triangle edge (" + std::to_string(p) + ", " +
                          std::to_string(q) + ") is not a shell-1 bond");
      }
      if (!used_edges.insert(pair_key(p, q)).second) {
        throw ConfigError("geometry: triangles overlap on edge (" + std::to_string(p) + ", " +
                          std::to_string(q) + ")");
      }
    }
  }
}

LatticeGeometry geometry_from_json(const std::string& text) {
  using nlohmann::json;
  LatticeGeometry geometry;
  try {
    const json doc = json::parse(text);
    geometry.n_sites = doc.at("n_sites").get<int>();
    for (const auto& p : doc.at("positions")) {
      geometry.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    for (const auto& b : doc.at("bonds")) {
      Bond bond;
      bond.i = b.at(0).get<int>();
      bond.j = b.at(1).get<int>();
      bond.shell = b.at(2).get<int>();
      bond.unit = {b.at(3).at(0).get<double>(), b.at(3).at(1).get<double>()};
      geometry.bonds.push_back(bond);
    }
    if (doc.contains("triangles")) {
      for (const auto& t : doc.at("triangles")) {
        geometry.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
      }
    }
    if (doc.contains("translation_vectors")) {
      for (const auto& t : doc.at("translation_vectors")) {
        geometry.translation_vectors.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
      }
    }
    geometry.is_chain = doc.value("is_chain", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("geometry JSON: ") + e.what());
  }
  validate_geometry(geometry);
  return geometry;
}

LatticeGeometry load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open geometry file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return geometry_from_json(buffer.str());
}

std::string geometry_to_json(const LatticeGeometry& geometry) {
  using nlohmann::json;
  json doc;
  doc["n_sites"] = geometry.n_sites;
  doc["is_chain"] = geometry.is_chain;
  doc["positions"] = json::array();
  for (const Vec2& p : geometry.positions) doc["positions"].push_back({p[0], p[1]});
  doc["bonds"] = json::array();
  for (const Bond& b : geometry.bonds) {
    doc["bonds"].push_back({b.i, b.j, b.shell, {b.unit[0], b.unit[1]}});
  }
  doc["triangles"] = json::array();
  for (const Triangle& t : geometry.triangles) doc["triangles"].push_back({t.a, t.b, t.c});
  doc["translation_vectors"] = json::array();
  for (const Vec2& t : geometry.translation_vectors) doc["translation_vectors"].push_back({t[0], t[1]});
  return doc.dump(2);
}

}  // namespace degen
