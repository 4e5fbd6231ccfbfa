// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_HAMILTONIAN_HPP
#define DEGEN_HAMILTONIAN_HPP

#include "degen/lattice.hpp"
#include "degen/types.hpp"

#include <array>
#include <vector>

namespace degen {

using Coupling3 = std::array<std::array<double, 3>, 3>;

/// c * S^axis_site
struct OneSiteTerm {
  int site = 0;
  Axis axis = Axis::z;
  double coefficient = 0.0;
};

/// sum_{mu,nu} coupling[mu][nu] * S^mu_i S^nu_j, with i > j.
struct TwoSiteTerm {
  int i = 0;
  int j = 0;
  Coupling3 coupling{};
};

/// Spin-1/2 Hamiltonian stored as a term list and applied matrix-free.
///
/// Spin operators have eigenvalues +-1/2. On construction the terms are
/// compiled into a diagonal (all S^z-only pieces) plus per-site and per-pair
/// off-diagonal kernels, so `apply` costs O(terms * 2^n) and never forms the
/// full matrix. Immutable after construction; concurrent `apply` calls are
/// safe.
class HamiltonianTerms {
 public:
  HamiltonianTerms(int n_sites, std::vector<OneSiteTerm> one_site,
                   std::vector<TwoSiteTerm> two_site);

  int n_sites() const noexcept { return n_sites_; }
  std::size_t dimension() const noexcept { return hilbert_dimension(n_sites_); }
  const std::vector<OneSiteTerm>& one_site_terms() const noexcept { return one_site_; }
  const std::vector<TwoSiteTerm>& two_site_terms() const noexcept { return two_site_; }

  /// out = H * in. `out` is resized; it must not alias `in`.
  void apply(const StateVector& in, StateVector& out) const;
  StateVector apply(const StateVector& in) const;
  /// Column-wise product for a block of states.
  void apply(const StateBlock& in, StateBlock& out) const;

  /// Dense matrix for small systems (n <= 12).
  Eigen::MatrixXcd dense() const;

 private:
  struct SiteKernel {
    int site = 0;
    Complex flip_from_up;    // <down| op |up>
    Complex flip_from_down;  // <up| op |down>
  };
  struct PairKernel {
    int i = 0;
    int j = 0;
    // Off-diagonal part of the 4x4 local operator (diagonal zeroed); local
    // index is bit_i + 2 * bit_j.
    std::array<std::array<Complex, 4>, 4> local{};
  };

  void apply_raw(const Complex* in, Complex* out) const;

  int n_sites_;
  std::vector<OneSiteTerm> one_site_;
  std::vector<TwoSiteTerm> two_site_;
  Eigen::VectorXd diagonal_;
  std::vector<SiteKernel> site_kernels_;
  std::vector<PairKernel> pair_kernels_;
};

/// H = sum_bonds J S^z_i S^z_j + h sum_i S^x_i on a chain.
HamiltonianTerms build_ising(const LatticeGeometry& geometry, double J, double h);

/// Orientation of the in-plane DM vector relative to the bond direction.
enum class DmConvention {
  z_cross_u,  // D_ij = |D| (z x u_ij)
  u_cross_z,  // D_ij = |D| (u_ij x z)
};

/// H = sum J S_i.S_j + sum D_ij.(S_i x S_j) + h sum_i S^z_i over shell-1
/// bonds, u_ij being the unit displacement from j to i.
HamiltonianTerms build_dmi(const LatticeGeometry& geometry, double J, double D_magnitude,
                           double h, DmConvention convention = DmConvention::z_cross_u);

/// Coupling matrix J*delta + epsilon.D for one bond.
Coupling3 dmi_coupling(double J, const std::array<double, 3>& dm_vector);

/// Re <v|H|v> for a normalized v. Throws std::invalid_argument when
/// |<v|v> - 1| > 1e-8, and std::logic_error if Im <v|H|v> exceeds 1e-10.
double expectation(const HamiltonianTerms& H, const StateVector& v);

}  // namespace degen

#endif  // DEGEN_HAMILTONIAN_HPP
