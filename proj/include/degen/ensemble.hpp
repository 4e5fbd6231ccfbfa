// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_ENSEMBLE_HPP
#define DEGEN_ENSEMBLE_HPP

#include "degen/rng.hpp"
#include "degen/types.hpp"

#include <string>
#include <string_view>

namespace degen {

enum class CoefficientLaw {
  haar_gaussian,  // complex Gaussian parts, then normalized
  uniform_box,    // parts uniform on (-1, 1), then normalized
};

CoefficientLaw parse_law(std::string_view name);
std::string law_name(CoefficientLaw law);

/// Normalized complex amplitudes over the members of a multiplet.
using CoefficientVector = Eigen::VectorXcd;

struct EnsembleSpec {
  int count = 8192;
  CoefficientLaw law = CoefficientLaw::haar_gaussian;
  int degree = 1;
  std::uint64_t master_seed = 1;
};

/// One coefficient vector of length D. Throws std::invalid_argument if D < 1.
CoefficientVector sample_coefficients(int D, CoefficientLaw law, RngStream& rng);

/// Sample `index` of the ensemble keyed by `master_seed`; independent of
/// which other samples are drawn or in which order.
CoefficientVector sample_coefficients(int D, CoefficientLaw law, std::uint64_t master_seed,
                                      std::uint64_t index);

/// sum_d coeffs[d] * basis.col(d).
StateVector superpose(const StateBlock& basis, const CoefficientVector& coeffs);

/// Two ways of writing a zero-field Ising ground state with the same pair
/// of coefficients: `d` over the product states {all up, all down}, `e` over
/// their even and odd combinations.
enum class IsingVariant { d, e };

/// Half-chain entropy in bits of alpha0 |psi_0> + alpha1 |psi_1> for the
/// given basis variant. Throws std::invalid_argument unless
/// |alpha0|^2 + |alpha1|^2 = 1 within 1e-12.
double closed_form_ising_entropy(Complex alpha0, Complex alpha1, IsingVariant variant);

/// Columns |up...up>, |down...down> on n sites.
StateBlock ising_product_basis(int n_sites);

/// basis * F with F the D x D discrete Fourier unitary. For D = 2 this maps
/// the product pair to (|up..> +- |down..>) / sqrt(2).
StateBlock fourier_remix(const StateBlock& basis);

/// Binary entropy in bits, with 0 log 0 = 0.
double binary_entropy(double p);

}  // namespace degen

#endif  // DEGEN_ENSEMBLE_HPP
