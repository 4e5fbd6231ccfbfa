// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/observables.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace degen {

namespace {

int sites_of(const StateBlock& states) {
  const auto dim = static_cast<std::size_t>(states.rows());
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("observables: state length must be a power of two >= 2");
  }
  return std::countr_zero(dim);
}

void check_distinct(int n, std::initializer_list<int> sites) {
  std::size_t seen = 0;
  for (int s : sites) {
    if (s < 0 || s >= n) {
      throw std::invalid_argument("observables: site " + std::to_string(s) + " out of range");
    }
    if (seen & (std::size_t{1} << s)) {
      throw std::invalid_argument("observables: site " + std::to_string(s) + " repeated");
    }
    seen |= std::size_t{1} << s;
  }
}

}  // namespace

Complex expectation(const StateVector& v, const SpinProduct& product) {
  const int n = sites_of(v);
  if (product.factors.size() > 3) {
    throw std::invalid_argument("expectation: at most three spin factors are supported");
  }
  std::size_t flip = 0;
  std::size_t used = 0;
  std::size_t z_mask = 0;
  std::size_t y_mask = 0;
  int y_count = 0;
  for (const auto& [site, axis] : product.factors) {
    if (site < 0 || site >= n) {
      throw std::invalid_argument("expectation: site " + std::to_string(site) + " out of range");
    }
    const std::size_t bit = std::size_t{1} << site;
    if (used & bit) {
      throw std::invalid_argument("expectation: site " + std::to_string(site) + " repeated");
    }
    used |= bit;
    if (axis != Axis::z) flip |= bit;
    if (axis == Axis::z) z_mask |= bit;
    if (axis == Axis::y) {
      y_mask |= bit;
      ++y_count;
    }
  }
  // S^y|0> = (i/2)|1>, S^y|1> = (-i/2)|0>: a factor i per y, and a sign for
  // every y acting on a down spin. S^z contributes a sign per down spin.
  Complex base = std::pow(0.5, static_cast<double>(product.factors.size()));
  static const Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  base *= kIPowers[y_count % 4];
  const std::size_t sign_mask = z_mask | y_mask;
  Complex sum = 0.0;
  for (std::size_t s = 0; s < static_cast<std::size_t>(v.size()); ++s) {
    const Complex term = std::conj(v[static_cast<Eigen::Index>(s ^ flip)]) * v[static_cast<Eigen::Index>(s)];
    sum += (std::popcount(s & sign_mask) & 1) ? -term : term;
  }
  return base * sum;
}

double degenerate_average(const StateBlock& states, const SpinProduct& product) {
  if (states.cols() == 0) throw std::invalid_argument("degenerate_average: no states");
  double total = 0.0;
  for (Eigen::Index d = 0; d < states.cols(); ++d) {
    const StateVector v = states.col(d);
    total += expectation(v, product).real();
  }
  return total / static_cast<double>(states.cols());
}

ZCorrelations::ZCorrelations(const StateBlock& states) : n_sites_(sites_of(states)) {
  if (states.cols() == 0) throw std::invalid_argument("ZCorrelations: no states");
  probability_ = states.cwiseAbs2().rowwise().sum() / static_cast<double>(states.cols());
}

double ZCorrelations::product(std::size_t site_mask) const {
  double sum = 0.0;
  for (std::size_t s = 0; s < static_cast<std::size_t>(probability_.size()); ++s) {
    const double p = probability_[static_cast<Eigen::Index>(s)];
    sum += (std::popcount(s & site_mask) & 1) ? -p : p;
  }
  return sum * std::pow(0.5, std::popcount(site_mask));
}

double ZCorrelations::sz(int i) const {
  check_distinct(n_sites_, {i});
  return product(std::size_t{1} << i);
}

double ZCorrelations::szz(int i, int j) const {
  check_distinct(n_sites_, {i, j});
  return product((std::size_t{1} << i) | (std::size_t{1} << j));
}

double ZCorrelations::szzz(int i, int j, int k) const {
  check_distinct(n_sites_, {i, j, k});
  return product((std::size_t{1} << i) | (std::size_t{1} << j) | (std::size_t{1} << k));
}

double ursell2(const ZCorrelations& z, int i, int j) {
  if (i == j) throw std::invalid_argument("ursell2: sites must differ");
  return z.szz(i, j) - z.sz(i) * z.sz(j);
}

double ursell2(const StateBlock& states, int i, int j) {
  return ursell2(ZCorrelations(states), i, j);
}

double ursell3(const ZCorrelations& z, int i, int j, int k, UrsellForm form) {
  const double ijk = z.szzz(i, j, k);
  const double si = z.sz(i);
  const double sj = z.sz(j);
  const double sk = z.sz(k);
  if (form == UrsellForm::literal) {
    return ijk - 3.0 * si * z.szz(j, k) + 2.0 * si * sj * sk;
  }
  return ijk - si * z.szz(j, k) - sj * z.szz(i, k) - sk * z.szz(i, j) + 2.0 * si * sj * sk;
}

double ursell3(const StateBlock& states, int i, int j, int k, UrsellForm form) {
  return ursell3(ZCorrelations(states), i, j, k, form);
}

double triangle_chirality(const StateBlock& states, const Triangle& t) {
  const int n = sites_of(states);
  check_distinct(n, {t.a, t.b, t.c});
  constexpr Axis X = Axis::x, Y = Axis::y, Z = Axis::z;
  struct Term {
    Axis a, b, c;
    double sign;
  };
  static constexpr Term kTerms[6] = {{X, Y, Z, 1.0},  {Y, Z, X, 1.0},  {Z, X, Y, 1.0},
                                     {X, Z, Y, -1.0}, {Y, X, Z, -1.0}, {Z, Y, X, -1.0}};
  double total = 0.0;
  for (const Term& term : kTerms) {
    total += term.sign *
             degenerate_average(states, {{{t.a, term.a}, {t.b, term.b}, {t.c, term.c}}});
  }
  return total;
}

double scalar_chirality(const StateBlock& states, const std::vector<Triangle>& triangles) {
  if (triangles.empty()) throw std::invalid_argument("scalar_chirality: no triangles");
  double sum = 0.0;
  for (const Triangle& t : triangles) sum += triangle_chirality(states, t);
  const double count = static_cast<double>(triangles.size());
  return count / std::numbers::pi * (sum / count);
}

std::vector<double> local_moments(const StateBlock& states, Axis axis) {
  const int n = sites_of(states);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = degenerate_average(states, {{{i, axis}}});
  return out;
}

double shell_ursell2(const ZCorrelations& z, const LatticeGeometry& geometry, int shell) {
  double sum = 0.0;
  int count = 0;
  for (const Bond& b : geometry.bonds) {
    if (b.shell != shell) continue;
    sum += ursell2(z, b.i, b.j);
    ++count;
  }
  return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

double triangle_ursell3(const ZCorrelations& z, const LatticeGeometry& geometry,
                        UrsellForm form) {
  if (geometry.triangles.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const Triangle& t : geometry.triangles) sum += ursell3(z, t.a, t.b, t.c, form);
  return sum / static_cast<double>(geometry.triangles.size());
}

}  // namespace degen
