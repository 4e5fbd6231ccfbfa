// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_TYPES_HPP
#define DEGEN_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace degen {

using Complex = std::complex<double>;

/// Amplitudes over the 2^n computational basis. Bit i of a basis index is
/// the z-projection of site i: 0 is spin up (S^z = +1/2), 1 is spin down.
using StateVector = Eigen::VectorXcd;

/// Column-stacked set of state vectors (one state per column).
using StateBlock = Eigen::MatrixXcd;

enum class Axis { x, y, z };

Axis parse_axis(std::string_view name);
char axis_name(Axis axis);

/// Raised for malformed user input (configs, geometry files, masks).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative solve does not reach the requested tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

inline std::size_t hilbert_dimension(int n_sites) {
  return std::size_t{1} << n_sites;
}

}  // namespace degen

#endif  // DEGEN_TYPES_HPP
