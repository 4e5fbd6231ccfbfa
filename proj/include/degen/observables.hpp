// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_OBSERVABLES_HPP
#define DEGEN_OBSERVABLES_HPP

#include "degen/lattice.hpp"
#include "degen/types.hpp"

#include <utility>
#include <vector>

namespace degen {

/// Product of single-site spin components on distinct sites, e.g.
/// {{0, x}, {3, z}} = S^x_0 S^z_3. At most three factors.
struct SpinProduct {
  std::vector<std::pair<int, Axis>> factors;
};

/// <v|P|v> for one state. Throws std::invalid_argument on repeated sites,
/// more than three factors or out-of-range sites.
Complex expectation(const StateVector& v, const SpinProduct& product);

/// (1/D) sum_d <psi_d|P|psi_d> over the columns of `states` (real part; the
/// operator is Hermitian because the sites are distinct).
double degenerate_average(const StateBlock& states, const SpinProduct& product);

/// Degenerate average of every S^z-only product, evaluated from the averaged
/// Born distribution P(s) = (1/D) sum_d |psi_d(s)|^2 computed once.
class ZCorrelations {
 public:
  explicit ZCorrelations(const StateBlock& states);

  int n_sites() const noexcept { return n_sites_; }
  double sz(int i) const;
  double szz(int i, int j) const;
  double szzz(int i, int j, int k) const;

 private:
  double product(std::size_t site_mask) const;
  int n_sites_;
  Eigen::VectorXd probability_;
};

/// <S^z_i S^z_j> - <S^z_i><S^z_j> with degenerate averages.
double ursell2(const ZCorrelations& z, int i, int j);
double ursell2(const StateBlock& states, int i, int j);

/// literal: <ijk> - 3 <i><jk> + 2 <i><j><k> (first index distinguished).
/// symmetric: the third joint cumulant,
/// <ijk> - <i><jk> - <j><ik> - <k><ij> + 2 <i><j><k>.
enum class UrsellForm { literal, symmetric };
double ursell3(const ZCorrelations& z, int i, int j, int k,
               UrsellForm form = UrsellForm::literal);
double ursell3(const StateBlock& states, int i, int j, int k,
               UrsellForm form = UrsellForm::literal);

/// Degenerate average of S_a . (S_b x S_c).
double triangle_chirality(const StateBlock& states, const Triangle& t);

/// (N / pi) * mean over triangles of triangle_chirality, N the number of
/// triangles. Throws std::invalid_argument for an empty list or a triangle
/// with repeated or out-of-range vertices.
double scalar_chirality(const StateBlock& states, const std::vector<Triangle>& triangles);

/// Per-site degenerate average of S^axis.
std::vector<double> local_moments(const StateBlock& states, Axis axis);

/// Mean of Gamma^zz over the bonds of one shell; NaN if the shell is empty.
double shell_ursell2(const ZCorrelations& z, const LatticeGeometry& geometry, int shell);

/// Mean of the three-spin correlator over the stored triangles, vertices in
/// stored order; NaN if there are none.
double triangle_ursell3(const ZCorrelations& z, const LatticeGeometry& geometry,
                        UrsellForm form = UrsellForm::literal);

}  // namespace degen

#endif  // DEGEN_OBSERVABLES_HPP
