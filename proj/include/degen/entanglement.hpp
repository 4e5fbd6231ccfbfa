// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_ENTANGLEMENT_HPP
#define DEGEN_ENTANGLEMENT_HPP

#include "degen/ensemble.hpp"
#include "degen/lattice.hpp"
#include "degen/types.hpp"

#include <span>
#include <vector>

namespace degen {

/// Subsystem A as a set of sites; B is the complement.
class BipartitionMask {
 public:
  /// Throws ConfigError unless `sites_a` is a non-empty proper subset of
  /// [0, n_sites) without repeats.
  BipartitionMask(int n_sites, std::vector<int> sites_a);

  int n_sites() const noexcept { return n_sites_; }
  const std::vector<int>& sites_a() const noexcept { return sites_a_; }
  const std::vector<int>& sites_b() const noexcept { return sites_b_; }
  BipartitionMask complement() const { return {n_sites_, sites_b_}; }

  /// Sites {0, ..., n/2 - 1}.
  static BipartitionMask half_chain(int n_sites);
  /// The floor(n/2) sites with the smallest x coordinate, ties broken by y.
  static BipartitionMask geometric_half(const LatticeGeometry& geometry);

 private:
  int n_sites_;
  std::vector<int> sites_a_;
  std::vector<int> sites_b_;
};

/// Eigenvalues of rho_A, descending, length min(2^|A|, 2^|B|).
using SchmidtSpectrum = std::vector<double>;

/// Amplitudes reshaped to a 2^|A| x 2^|B| matrix: row index packs the A
/// bits in mask order, column index the B bits.
Eigen::MatrixXcd reshape_bipartite(const StateVector& state, const BipartitionMask& mask);

/// Squared singular values of the reshaped amplitude matrix. Throws
/// std::invalid_argument on a dimension mismatch or a state whose norm
/// deviates from 1 by more than 1e-8.
SchmidtSpectrum reduced_spectrum(const StateVector& state, const BipartitionMask& mask);

/// -sum w log2 w over Schmidt weights, weights below 1e-14 dropped.
double entropy_bits(std::span<const double> weights);
double von_neumann_entropy(const StateVector& state, const BipartitionMask& mask);

struct EntropyStatistics {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::vector<double> bin_edges;
  std::vector<double> probabilities;
  std::size_t sample_count = 0;
};

/// Mean, population std and a normalized histogram over [0, max_entropy].
/// Throws std::invalid_argument for an empty sample or bins < 1.
EntropyStatistics summarize_entropies(std::span<const double> entropies, double max_entropy,
                                      int bins);
EntropyStatistics entropy_distribution(std::span<const StateVector> states,
                                       const BipartitionMask& mask, int bins);

/// Entropies of many superpositions sum_d alpha_d |psi_d> of one fixed
/// basis. The A-side support of the whole span is found once (directions
/// carrying total weight below `truncation` are dropped), after which each
/// sample costs a small Hermitian eigenvalue problem. The discarded weight
/// of any normalized superposition is at most the reported
/// discarded_weight().
class SubspaceEntropySampler {
 public:
  SubspaceEntropySampler(const StateBlock& basis, const BipartitionMask& mask,
                         double truncation = 1e-15);

  int degree() const noexcept { return degree_; }
  int rank() const noexcept { return rank_; }
  double discarded_weight() const noexcept { return discarded_; }

  double entropy(const CoefficientVector& coeffs) const;
  SchmidtSpectrum spectrum(const CoefficientVector& coeffs) const;

 private:
  int degree_ = 0;
  int rank_ = 0;
  double discarded_ = 0.0;
  // blocks_[d * degree_ + e] = P_d P_e^H with P_d the compressed amplitude matrix.
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// Entropy samples of `count` ensemble members drawn with the given law;
/// sample i uses coefficient stream (master_seed, i). Runs on up to
/// `threads` threads; the result does not depend on the thread count.
std::vector<double> sample_entropies(const SubspaceEntropySampler& sampler, int count,
                                     CoefficientLaw law, std::uint64_t master_seed,
                                     int threads = 1);

}  // namespace degen

#endif  // DEGEN_ENTANGLEMENT_HPP
