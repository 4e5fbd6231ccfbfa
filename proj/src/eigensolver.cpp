// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/eigensolver.hpp"

#include "degen/dense.hpp"
#include "degen/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace degen {

namespace {

void fill_random(Eigen::Ref<StateBlock> block, std::uint64_t seed, std::uint64_t index) {
  RngStream rng(seed, index, StreamTag::solver_start);
  for (Eigen::Index c = 0; c < block.cols(); ++c)
    for (Eigen::Index r = 0; r < block.rows(); ++r) block(r, c) = Complex(rng.normal(), rng.normal());
}

// Orthogonalizes the block `x` against `basis` (block classical Gram-Schmidt,
// applied twice unless the caller already did) and then orthonormalizes its
// columns. Columns that collapse are replaced by fresh random directions
// orthogonal to `basis`; returns how many were replaced.
int orthonormalize_against(const Eigen::Ref<const StateBlock>& basis, StateBlock& x,
                           std::uint64_t seed, std::uint64_t& random_counter,
                           bool already_orthogonal = false) {
  int replaced = 0;
  if (basis.cols() > 0 && !already_orthogonal) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::MatrixXcd overlap = basis.adjoint() * x;
      x.noalias() -= basis * overlap;
    }
  }
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      auto col = x.col(c);
      const double before = col.norm();
      for (int pass = 0; pass < 2; ++pass) {
        if (c > 0) {
          const auto prev = x.leftCols(c);
          const Eigen::VectorXcd overlap = prev.adjoint() * col;
          col.noalias() -= prev * overlap;
        }
      }
      const double after = col.norm();
      if (before > 0.0 && after > 1e-10 * before) {
        col /= after;
        break;
      }
      ++replaced;
      StateBlock fresh(x.rows(), 1);
      fill_random(fresh, seed, random_counter++);
      if (basis.cols() > 0) {
        for (int pass = 0; pass < 2; ++pass) {
          const Eigen::VectorXcd overlap = basis.adjoint() * fresh.col(0);
          fresh.col(0).noalias() -= basis * overlap;
        }
      }
      col = fresh.col(0);
    }
  }
  return replaced;
}

EigenSolution truncate_dense(const HamiltonianTerms& H, int k) {
  EigenSolution full = dense_spectrum(H);
  EigenSolution out;
  out.k = k;
  out.energies.assign(full.energies.begin(), full.energies.begin() + k);
  out.vectors = full.vectors.leftCols(k);
  out.residual_norms = residual_norms(H, out.vectors, out.energies);
  out.matvecs = full.matvecs;
  return out;
}

}  // namespace

double EigenSolution::max_residual() const {
  double worst = 0.0;
  for (double r : residual_norms) worst = std::max(worst, r);
  return worst;
}

std::vector<double> residual_norms(const HamiltonianTerms& H, const StateBlock& vectors,
                                   std::span<const double> energies) {
  std::vector<double> out;
  StateVector hv;
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    const StateVector v = vectors.col(c);
    H.apply(v, hv);
    out.push_back((hv - energies[static_cast<std::size_t>(c)] * v).norm());
  }
  return out;
}

EigenSolution dense_spectrum(const HamiltonianTerms& H) {
  if (H.n_sites() > 12) throw std::invalid_argument("dense_spectrum: n_sites must be <= 12");
  dense::HermitianEigen eig = dense::hermitian_eigen(H.dense(), true);
  EigenSolution out;
  out.k = static_cast<int>(eig.values.size());
  out.energies.assign(eig.values.data(), eig.values.data() + eig.values.size());
  out.vectors = std::move(eig.vectors);
  out.residual_norms.assign(out.energies.size(), 0.0);
  out.matvecs = static_cast<long>(H.dimension());
  return out;
}

EigenSolution lowest_eigenpairs(const HamiltonianTerms& H, const SolverOptions& options) {
  const auto dim = static_cast<Eigen::Index>(H.dimension());
  const int k = options.k;
  if (k < 1 || k > 64) throw std::invalid_argument("lowest_eigenpairs: k must be in [1, 64]");
  if (k > dim) {
    throw std::invalid_argument("lowest_eigenpairs: k = " + std::to_string(k) +
                                " exceeds the Hilbert-space dimension " + std::to_string(dim));
  }
  if (!(options.tol > 0.0)) throw std::invalid_argument("lowest_eigenpairs: tol must be > 0");

  const Eigen::Index block = std::max(1, options.block_size);
  const Eigen::Index max_basis = options.max_basis > 0
                                     ? options.max_basis
                                     : std::max<Eigen::Index>(2 * k + 4 * block, 96);
  if (max_basis < k + 4 * block) {
    throw std::invalid_argument("lowest_eigenpairs: max_basis must be >= k + 4 * block_size");
  }
  if (dim <= max_basis + block || static_cast<std::size_t>(dim) <= options.dense_cutoff) {
    return truncate_dense(H, k);
  }

  const Eigen::Index keep =
      std::min<Eigen::Index>(max_basis - 2 * block,
                             options.keep > 0 ? std::max<Eigen::Index>(options.keep, k)
                                              : std::max<Eigen::Index>(k + block, max_basis / 2));
  StateBlock basis(dim, max_basis);
  StateBlock h_basis(dim, max_basis);
  Eigen::MatrixXcd projected = Eigen::MatrixXcd::Zero(max_basis, max_basis);
  Eigen::Index m = 0;

  std::uint64_t random_counter = 0;
  StateBlock x(dim, block);
  fill_random(x, options.seed, random_counter++);
  orthonormalize_against(basis.leftCols(0), x, options.seed, random_counter);

  EigenSolution out;
  out.k = k;
  StateBlock hx;
  std::vector<double> best_residuals;
  std::vector<double> estimates;
  // A collapsed block means the Krylov space became invariant, which can hide
  // members of a multiplet wider than the block. After a collapse, converged
  // values are only accepted when they survive, unchanged, either a later
  // collapse or a full restart cycle grown from the random replacements.
  std::optional<Eigen::VectorXd> invariant_theta;
  bool collapse_pending = false;
  bool cycled = false;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    out.iterations = iter;
    const Eigen::Index nb = x.cols();
    H.apply(x, hx);
    out.matvecs += nb;
    basis.middleCols(m, nb) = x;
    h_basis.middleCols(m, nb) = hx;
    projected.block(0, m, m + nb, nb).noalias() = basis.leftCols(m + nb).adjoint() * hx;
    projected.block(m, 0, nb, m) = projected.block(0, m, m, nb).adjoint();
    {
      auto diag_block = projected.block(m, m, nb, nb);
      const Eigen::MatrixXcd sym = 0.5 * (diag_block + diag_block.adjoint());
      diag_block = sym;
    }
    m += nb;

    // Block Lanczos remainder: H V = V T + Q R E^T with Q orthonormal and
    // orthogonal to V. The first Gram-Schmidt pass reuses the projections.
    StateBlock remainder = hx;
    remainder.noalias() -= basis.leftCols(m) * projected.block(0, m - nb, m, nb);
    {
      const Eigen::MatrixXcd overlap = basis.leftCols(m).adjoint() * remainder;
      remainder.noalias() -= basis.leftCols(m) * overlap;
    }
    StateBlock raw = remainder;
    collapse_pending =
        orthonormalize_against(basis.leftCols(m), remainder, options.seed, random_counter, true) >
            0 ||
        collapse_pending;
    const Eigen::MatrixXcd coupling = remainder.adjoint() * raw;  // R

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(projected.topLeftCorner(m, m));
    const Eigen::VectorXd& theta = ritz.eigenvalues();
    const Eigen::Index wanted = std::min<Eigen::Index>(m, k);
    double worst_estimate = 0.0;
    estimates.assign(static_cast<std::size_t>(wanted), 0.0);
    for (Eigen::Index c = 0; c < wanted; ++c) {
      const Eigen::VectorXcd tail = ritz.eigenvectors().block(m - nb, c, nb, 1);
      estimates[c] = (coupling * tail).norm();
      worst_estimate = std::max(worst_estimate, estimates[c]);
    }

    const bool full = m + remainder.cols() > max_basis;
    const bool maybe_done = m >= k && worst_estimate <= options.tol;
    if (maybe_done || full) {
      const Eigen::Index count = std::min<Eigen::Index>(m, keep);
      const Eigen::MatrixXcd coeffs = ritz.eigenvectors().leftCols(count);
      StateBlock y = basis.leftCols(m) * coeffs;
      StateBlock hy = h_basis.leftCols(m) * coeffs;
      std::vector<double> norms(static_cast<std::size_t>(wanted));
      bool converged = m >= k;
      for (Eigen::Index c = 0; c < wanted; ++c) {
        norms[c] = (hy.col(c) - theta[c] * y.col(c)).norm();
        converged = converged && norms[c] <= options.tol;
      }
      best_residuals = norms;
      if (converged && (collapse_pending || invariant_theta)) {
        const Eigen::VectorXd lowest = theta.head(k);
        const bool stable = invariant_theta &&
                            (lowest - *invariant_theta).cwiseAbs().maxCoeff() <= options.tol;
        if (!stable) {
          invariant_theta = lowest;
          collapse_pending = false;
          cycled = false;
          converged = false;
        } else {
          converged = collapse_pending || cycled;
        }
      }
      if (converged) {
        out.energies.assign(theta.data(), theta.data() + k);
        out.vectors = y.leftCols(k);
        out.residual_norms = std::move(norms);
        return out;
      }
      if (full) {
        // Thick restart: keep the lowest Ritz pairs and continue from the
        // Lanczos remainder.
        basis.leftCols(count) = y;
        h_basis.leftCols(count) = hy;
        projected.setZero();
        projected.topLeftCorner(count, count).diagonal() = theta.head(count).cast<Complex>();
        m = count;
        cycled = invariant_theta.has_value();
        if (orthonormalize_against(basis.leftCols(m), remainder, options.seed, random_counter) > 0)
          collapse_pending = true;
        x = std::move(remainder);
        continue;
      }
    }
    x = std::move(remainder);
  }

  std::ostringstream msg;
  msg << "lowest_eigenpairs: no convergence after " << options.max_iterations
      << " iterations; residuals of the lowest pairs:";
  if (best_residuals.empty()) best_residuals = estimates;
  double worst = 0.0;
  for (double r : best_residuals) {
    msg << ' ' << r;
    worst = std::max(worst, r);
  }
  throw SolverError(msg.str(), worst);
}

double default_degeneracy_eps(double ground_energy) {
  return 1e-10 * std::max(1.0, std::abs(ground_energy));
}

std::vector<Multiplet> group_multiplets(std::span<const double> energies, double eps_deg) {
  std::vector<Multiplet> out;
  if (energies.empty()) return out;
  std::size_t start = 0;
  auto close = [&](std::size_t end) {
    Multiplet mp;
    mp.start_index = start;
    mp.degree = end - start;
    double sum = 0.0;
    for (std::size_t i = start; i < end; ++i) sum += energies[i];
    mp.energy = sum / static_cast<double>(mp.degree);
    mp.gap_above = end < energies.size() ? energies[end] - energies[end - 1]
                                         : std::numeric_limits<double>::quiet_NaN();
    out.push_back(mp);
    start = end;
  };
  for (std::size_t i = 0; i + 1 < energies.size(); ++i) {
    if (energies[i + 1] - energies[i] > eps_deg) close(i + 1);
  }
  close(energies.size());
  return out;
}

RefinedBlock refine_degenerate_block(const HamiltonianTerms& H, const StateBlock& block) {
  if (block.cols() == 0) throw std::invalid_argument("refine_degenerate_block: empty block");
  if (static_cast<std::size_t>(block.rows()) != H.dimension()) {
    throw std::invalid_argument("refine_degenerate_block: dimension mismatch");
  }
  // Symmetric (Loewdin) orthonormalization keeps the result as close as
  // possible to the input vectors.
  const Eigen::MatrixXcd gram = block.adjoint() * block;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram_eig(gram);
  const Eigen::VectorXd& g = gram_eig.eigenvalues();
  if (g.minCoeff() <= 1e-12 * std::max(1.0, g.maxCoeff())) {
    throw std::runtime_error("refine_degenerate_block: vectors are linearly dependent");
  }
  const Eigen::MatrixXcd inv_sqrt = gram_eig.eigenvectors() *
                                    g.cwiseSqrt().cwiseInverse().asDiagonal() *
                                    gram_eig.eigenvectors().adjoint();
  const StateBlock q = block * inv_sqrt;

  StateBlock hq;
  H.apply(q, hq);
  Eigen::MatrixXcd small = q.adjoint() * hq;
  small = 0.5 * (small + small.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(small);

  RefinedBlock out;
  out.vectors = q * eig.eigenvectors();
  const StateBlock hv = hq * eig.eigenvectors();
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    out.energies.push_back(eig.eigenvalues()[c]);
    out.residual_norms.push_back((hv.col(c) - eig.eigenvalues()[c] * out.vectors.col(c)).norm());
  }
  return out;
}

}  // namespace degen
