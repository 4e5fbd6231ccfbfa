// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_EIGENSOLVER_HPP
#define DEGEN_EIGENSOLVER_HPP

#include "degen/hamiltonian.hpp"
#include "degen/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace degen {

/// Low-lying eigenpairs, energies ascending. `vectors` holds one
/// orthonormal eigenvector per column.
struct EigenSolution {
  std::vector<double> energies;
  StateBlock vectors;
  std::vector<double> residual_norms;
  int k = 0;
  int iterations = 0;
  long matvecs = 0;

  StateVector vector(std::size_t index) const { return vectors.col(static_cast<Eigen::Index>(index)); }
  double max_residual() const;
};

struct SolverOptions {
  int k = 16;
  double tol = 1e-8;
  /// Vectors added per expansion; must exceed the largest multiplet expected
  /// near the bottom of the spectrum.
  int block_size = 8;
  /// Subspace size that triggers a thick restart; 0 picks
  /// max(2k + 4 * block_size, 96).
  int max_basis = 0;
  /// Ritz vectors kept across a restart; 0 picks max(k + block_size, max_basis / 2).
  int keep = 0;
  int max_iterations = 2000;
  std::uint64_t seed = 0x5eed;
  /// Systems whose dimension does not exceed this are solved densely.
  std::size_t dense_cutoff = 0;
};

/// k lowest eigenpairs by thick-restarted block Lanczos with full
/// reorthogonalization. Between restarts the subspace grows by the
/// orthogonalized block H X (so Ritz residual norms are available from the
/// block recurrence); when the basis fills up, the lowest Ritz pairs are kept.
/// Columns of the block that collapse (invariant subspace reached) are
/// replaced by random directions. A random starting block of width b resolves
/// multiplets of degree <= b; wider exact multiplets can be truncated, so
/// block_size should exceed the largest degeneracy of interest.
/// Convergence is confirmed with explicit residuals.
///
/// Throws SolverError when max_iterations is reached (message carries the
/// best residuals) and std::invalid_argument when k exceeds the dimension
/// or 64.
EigenSolution lowest_eigenpairs(const HamiltonianTerms& H, const SolverOptions& options);

/// Full spectrum by dense Hermitian diagonalization; n_sites <= 12.
EigenSolution dense_spectrum(const HamiltonianTerms& H);

struct Multiplet {
  std::size_t start_index = 0;
  std::size_t degree = 1;
  double energy = 0.0;
  /// Distance to the next multiplet; NaN for the last one.
  double gap_above = 0.0;
};

/// Greedy grouping: a new multiplet starts when E[i+1] - E[i] > eps_deg.
std::vector<Multiplet> group_multiplets(std::span<const double> energies, double eps_deg);

/// Default exact-degeneracy tolerance: 1e-10 * max(1, |E0|).
double default_degeneracy_eps(double ground_energy);

struct RefinedBlock {
  StateBlock vectors;
  std::vector<double> energies;
  std::vector<double> residual_norms;
};

/// Re-orthonormalizes the columns of `block`, diagonalizes H projected onto
/// their span and returns the rotated basis. Throws std::runtime_error if
/// the columns are numerically linearly dependent.
RefinedBlock refine_degenerate_block(const HamiltonianTerms& H, const StateBlock& block);

/// Residual norms ||H v - E v|| computed with fresh matvecs.
std::vector<double> residual_norms(const HamiltonianTerms& H, const StateBlock& vectors,
                                   std::span<const double> energies);

}  // namespace degen

#endif  // DEGEN_EIGENSOLVER_HPP
