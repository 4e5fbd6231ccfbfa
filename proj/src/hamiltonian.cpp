// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/hamiltonian.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace degen {

namespace {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

// Local basis: index 0 is spin up, 1 is spin down.
Mat2 spin_matrix(Axis axis) {
  const Complex i{0.0, 1.0};
  switch (axis) {
    case Axis::x:
      return {{{0.0, 0.5}, {0.5, 0.0}}};
    case Axis::y:
      return {{{0.0, -0.5 * i}, {0.5 * i, 0.0}}};
    case Axis::z:
      return {{{0.5, 0.0}, {0.0, -0.5}}};
  }
  return {};
}

constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

}  // namespace

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw ConfigError("unknown axis '" + std::string(name) + "' (expected x, y or z)");
}

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::x:
      return 'x';
    case Axis::y:
      return 'y';
    case Axis::z:
      return 'z';
  }
  return '?';
}

HamiltonianTerms::HamiltonianTerms(int n_sites, std::vector<OneSiteTerm> one_site,
                                   std::vector<TwoSiteTerm> two_site)
    : n_sites_(n_sites), one_site_(std::move(one_site)), two_site_(std::move(two_site)) {
  if (n_sites_ < 1 || n_sites_ > 30) {
    throw std::invalid_argument("HamiltonianTerms: n_sites must be in [1, 30]");
  }
  std::set<std::pair<int, int>> pairs;
  for (const TwoSiteTerm& t : two_site_) {
    if (t.i <= t.j || t.j < 0 || t.i >= n_sites_) {
      throw std::invalid_argument("HamiltonianTerms: two-site term needs n > i > j >= 0");
    }
    if (!pairs.insert({t.i, t.j}).second) {
      throw std::invalid_argument("HamiltonianTerms: pair (" + std::to_string(t.i) + ", " +
                                  std::to_string(t.j) + ") appears twice");
    }
  }
  for (const OneSiteTerm& t : one_site_) {
    if (t.site < 0 || t.site >= n_sites_) {
      throw std::invalid_argument("HamiltonianTerms: one-site term out of range");
    }
  }

  const std::size_t dim = dimension();
  diagonal_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));

  std::vector<Mat2> site_ops(static_cast<std::size_t>(n_sites_), Mat2{});
  std::vector<bool> site_used(static_cast<std::size_t>(n_sites_), false);
  for (const OneSiteTerm& t : one_site_) {
    const Mat2 s = spin_matrix(t.axis);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) site_ops[t.site][r][c] += t.coefficient * s[r][c];
    site_used[t.site] = true;
  }
  for (int site = 0; site < n_sites_; ++site) {
    if (!site_used[site]) continue;
    const Mat2& op = site_ops[site];
    const double up = op[0][0].real();
    const double down = op[1][1].real();
    const std::size_t mask = std::size_t{1} << site;
    for (std::size_t s = 0; s < dim; ++s) diagonal_[s] += (s & mask) ? down : up;
    if (op[1][0] != Complex{} || op[0][1] != Complex{}) {
      site_kernels_.push_back({site, op[1][0], op[0][1]});
    }
  }

  for (const TwoSiteTerm& t : two_site_) {
    std::array<std::array<Complex, 4>, 4> local{};
    for (int mu = 0; mu < 3; ++mu) {
      for (int nu = 0; nu < 3; ++nu) {
        const double m = t.coupling[mu][nu];
        if (m == 0.0) continue;
        const Mat2 si = spin_matrix(kAxes[mu]);
        const Mat2 sj = spin_matrix(kAxes[nu]);
        for (int ro = 0; ro < 4; ++ro)
          for (int co = 0; co < 4; ++co)
            local[ro][co] += m * si[ro & 1][co & 1] * sj[ro >> 1][co >> 1];
      }
    }
    std::array<double, 4> diag{};
    for (int l = 0; l < 4; ++l) diag[l] = local[l][l].real();
    const std::size_t mi = std::size_t{1} << t.i;
    const std::size_t mj = std::size_t{1} << t.j;
    for (std::size_t s = 0; s < dim; ++s) {
      diagonal_[s] += diag[((s & mi) ? 1 : 0) + ((s & mj) ? 2 : 0)];
    }
    bool off_diagonal = false;
    for (int ro = 0; ro < 4; ++ro)
      for (int co = 0; co < 4; ++co)
        if (ro != co && std::abs(local[ro][co]) > 0.0) off_diagonal = true;
    if (off_diagonal) {
      for (int l = 0; l < 4; ++l) local[l][l] = 0.0;
      pair_kernels_.push_back({t.i, t.j, local});
    }
  }
}

void HamiltonianTerms::apply_raw(const Complex* in, Complex* out) const {
  const std::size_t dim = dimension();
  for (std::size_t s = 0; s < dim; ++s) out[s] = diagonal_[s] * in[s];

  for (const SiteKernel& k : site_kernels_) {
    const std::size_t mask = std::size_t{1} << k.site;
    for (std::size_t hi = 0; hi < dim; hi += 2 * mask) {
      for (std::size_t s = hi; s < hi + mask; ++s) {
        const Complex up = in[s];
        const Complex down = in[s | mask];
        out[s | mask] += k.flip_from_up * up;
        out[s] += k.flip_from_down * down;
      }
    }
  }

  for (const PairKernel& k : pair_kernels_) {
    const std::size_t mi = std::size_t{1} << k.i;
    const std::size_t mj = std::size_t{1} << k.j;
    const auto& op = k.local;
    // Visit each 4-state group once through its all-up member; i > j so the
    // three loops run over the bits above i, between i and j, and below j.
    for (std::size_t hi = 0; hi < dim; hi += 2 * mi) {
      for (std::size_t mid = hi; mid < hi + mi; mid += 2 * mj) {
        for (std::size_t base = mid; base < mid + mj; ++base) {
          const Complex a0 = in[base];
          const Complex a1 = in[base | mi];
          const Complex a2 = in[base | mj];
          const Complex a3 = in[base | mi | mj];
          out[base] += op[0][1] * a1 + op[0][2] * a2 + op[0][3] * a3;
          out[base | mi] += op[1][0] * a0 + op[1][2] * a2 + op[1][3] * a3;
          out[base | mj] += op[2][0] * a0 + op[2][1] * a1 + op[2][3] * a3;
          out[base | mi | mj] += op[3][0] * a0 + op[3][1] * a1 + op[3][2] * a2;
        }
      }
    }
  }
}

void HamiltonianTerms::apply(const StateVector& in, StateVector& out) const {
  if (static_cast<std::size_t>(in.size()) != dimension()) {
    throw std::invalid_argument("HamiltonianTerms::apply: dimension mismatch (got " +
                                std::to_string(in.size()) + ", expected " +
                                std::to_string(dimension()) + ")");
  }
  out.resize(in.size());
  apply_raw(in.data(), out.data());
}

StateVector HamiltonianTerms::apply(const StateVector& in) const {
  StateVector out;
  apply(in, out);
  return out;
}

void HamiltonianTerms::apply(const StateBlock& in, StateBlock& out) const {
  if (static_cast<std::size_t>(in.rows()) != dimension()) {
    throw std::invalid_argument("HamiltonianTerms::apply: dimension mismatch");
  }
  out.resize(in.rows(), in.cols());
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    apply_raw(in.col(c).data(), out.col(c).data());
  }
}

Eigen::MatrixXcd HamiltonianTerms::dense() const {
  if (n_sites_ > 12) throw std::invalid_argument("HamiltonianTerms::dense: n_sites > 12");
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd h(dim, dim);
  StateVector unit = StateVector::Zero(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    unit[c] = 1.0;
    apply_raw(unit.data(), h.col(c).data());
    unit[c] = 0.0;
  }
  return h;
}

HamiltonianTerms build_ising(const LatticeGeometry& geometry, double J, double h) {
  if (!geometry.is_chain) throw ConfigError("build_ising: geometry must be a chain");
  std::vector<TwoSiteTerm> pairs;
  for (const Bond& bond : geometry.bonds) {
    if (bond.shell != 1) continue;
    TwoSiteTerm t{bond.i, bond.j, {}};
    t.coupling[2][2] = J;
    pairs.push_back(t);
  }
  std::vector<OneSiteTerm> fields;
  if (h != 0.0) {
    for (int s = 0; s < geometry.n_sites; ++s) fields.push_back({s, Axis::x, h});
  }
  return HamiltonianTerms(geometry.n_sites, std::move(fields), std::move(pairs));
}

Coupling3 dmi_coupling(double J, const std::array<double, 3>& d) {
  // D.(S_i x S_j) = sum eps_{mu nu lambda} D^lambda S^mu_i S^nu_j
  Coupling3 m{};
  m[0][0] = m[1][1] = m[2][2] = J;
  m[0][1] = d[2];
  m[1][0] = -d[2];
  m[1][2] = d[0];
  m[2][1] = -d[0];
  m[2][0] = d[1];
  m[0][2] = -d[1];
  return m;
}

HamiltonianTerms build_dmi(const LatticeGeometry& geometry, double J, double D_magnitude, double h,
                           DmConvention convention) {
  const double sign = convention == DmConvention::z_cross_u ? 1.0 : -1.0;
  std::vector<TwoSiteTerm> pairs;
  for (const Bond& bond : geometry.bonds) {
    if (bond.shell != 1) continue;
    // z x (ux, uy, 0) = (-uy, ux, 0)
    const std::array<double, 3> d{-sign * D_magnitude * bond.unit[1],
                                  sign * D_magnitude * bond.unit[0], 0.0};
    pairs.push_back({bond.i, bond.j, dmi_coupling(J, d)});
  }
  if (pairs.empty()) throw ConfigError("build_dmi: geometry has no shell-1 bonds");
  std::vector<OneSiteTerm> fields;
  if (h != 0.0) {
    for (int s = 0; s < geometry.n_sites; ++s) fields.push_back({s, Axis::z, h});
  }
  return HamiltonianTerms(geometry.n_sites, std::move(fields), std::move(pairs));
}

double expectation(const HamiltonianTerms& H, const StateVector& v) {
  const double norm2 = v.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-8) {
    throw std::invalid_argument("expectation: state is not normalized (|v|^2 = " +
                                std::to_string(norm2) + ")");
  }
  const Complex value = v.dot(H.apply(v));
  if (std::abs(value.imag()) > 1e-10) {
    throw std::logic_error("expectation: non-real energy, Hamiltonian is not Hermitian");
  }
  return value.real();
}

}  // namespace degen
