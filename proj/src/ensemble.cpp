// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace degen {

CoefficientLaw parse_law(std::string_view name) {
  if (name == "haar_gaussian" || name == "haar") return CoefficientLaw::haar_gaussian;
  if (name == "uniform_box" || name == "uniform") return CoefficientLaw::uniform_box;
  throw ConfigError("unknown coefficient law '" + std::string(name) +
                    "' (expected haar_gaussian or uniform_box)");
}

std::string law_name(CoefficientLaw law) {
  return law == CoefficientLaw::haar_gaussian ? "haar_gaussian" : "uniform_box";
}

CoefficientVector sample_coefficients(int D, CoefficientLaw law, RngStream& rng) {
  if (D < 1) throw std::invalid_argument("sample_coefficients: degree must be >= 1");
  CoefficientVector alpha(D);
  double norm2 = 0.0;
  // A zero vector has probability zero for both laws, but redraw anyway.
  while (!(norm2 > 0.0)) {
    for (int d = 0; d < D; ++d) {
      if (law == CoefficientLaw::haar_gaussian) {
        alpha[d] = Complex(rng.normal(), rng.normal());
      } else {
        alpha[d] = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      }
    }
    norm2 = alpha.squaredNorm();
  }
  alpha /= std::sqrt(norm2);
  return alpha;
}

CoefficientVector sample_coefficients(int D, CoefficientLaw law, std::uint64_t master_seed,
                                      std::uint64_t index) {
  RngStream rng(master_seed, index, StreamTag::coefficients);
  return sample_coefficients(D, law, rng);
}

StateVector superpose(const StateBlock& basis, const CoefficientVector& coeffs) {
  if (basis.cols() != coeffs.size()) {
    throw std::invalid_argument("superpose: " + std::to_string(coeffs.size()) +
                                " coefficients for " + std::to_string(basis.cols()) +
                                " basis states");
  }
  return basis * coeffs;
}

double binary_entropy(double p) {
  double s = 0.0;
  for (double w : {p, 1.0 - p}) {
    if (w > 0.0) s -= w * std::log2(w);
  }
  return s;
}

double closed_form_ising_entropy(Complex alpha0, Complex alpha1, IsingVariant variant) {
  const double norm2 = std::norm(alpha0) + std::norm(alpha1);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("closed_form_ising_entropy: |alpha0|^2 + |alpha1|^2 = " +
                                std::to_string(norm2) + ", expected 1");
  }
  double w0 = std::norm(alpha0);
  if (variant == IsingVariant::e) w0 = std::norm(alpha0 + alpha1) / 2.0;
  return binary_entropy(std::clamp(w0, 0.0, 1.0));
}

StateBlock ising_product_basis(int n_sites) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  StateBlock basis = StateBlock::Zero(dim, 2);
  basis(0, 0) = 1.0;
  basis(dim - 1, 1) = 1.0;
  return basis;
}

StateBlock fourier_remix(const StateBlock& basis) {
  const Eigen::Index D = basis.cols();
  Eigen::MatrixXcd F(D, D);
  const double scale = 1.0 / std::sqrt(static_cast<double>(D));
  for (Eigen::Index r = 0; r < D; ++r) {
    for (Eigen::Index c = 0; c < D; ++c) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(r * c) /
                           static_cast<double>(D);
      F(r, c) = std::polar(scale, phase);
    }
  }
  return basis * F;
}

}  // namespace degen
