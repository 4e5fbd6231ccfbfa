// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/dense.hpp"

#include <complex>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace degen::dense {

HermitianEigen hermitian_eigen(Eigen::MatrixXcd matrix, bool want_vectors) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("hermitian_eigen: matrix is not square");
  }
  const lapack_int n = static_cast<lapack_int>(matrix.rows());
  HermitianEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                     matrix.data(), n, out.values.data());
  if (info != 0) {
    throw std::runtime_error("LAPACKE_zheevd failed with info = " + std::to_string(info));
  }
  if (want_vectors) out.vectors = std::move(matrix);
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd matrix) {
  return hermitian_eigen(std::move(matrix), false).values;
}

}  // namespace degen::dense
