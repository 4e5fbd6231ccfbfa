// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_DENSE_HPP
#define DEGEN_DENSE_HPP

#include "degen/types.hpp"

#include <Eigen/Dense>

namespace degen::dense {

// Thin wrappers over LAPACK's divide-and-conquer Hermitian eigensolver.

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns, empty when only values were requested
};

/// Eigen-decomposition of a Hermitian matrix. Only the lower triangle is read.
HermitianEigen hermitian_eigen(Eigen::MatrixXcd matrix, bool want_vectors = true);

/// Ascending eigenvalues of a Hermitian matrix (lower triangle read).
Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd matrix);

}  // namespace degen::dense

#endif  // DEGEN_DENSE_HPP
