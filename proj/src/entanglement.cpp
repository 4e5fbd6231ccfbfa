// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/entanglement.hpp"

#include "degen/dense.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace degen {

namespace {

// Packs the bits of s at `sites` into consecutive low bits.
std::size_t gather_bits(std::size_t s, const std::vector<int>& sites) {
  std::size_t out = 0;
  for (std::size_t b = 0; b < sites.size(); ++b) out |= ((s >> sites[b]) & 1u) << b;
  return out;
}

void check_state(const StateVector& state, const BipartitionMask& mask, const char* who) {
  if (static_cast<std::size_t>(state.size()) != hilbert_dimension(mask.n_sites())) {
    throw std::invalid_argument(std::string(who) + ": state dimension does not match the mask");
  }
  const double norm2 = state.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-8) {
    throw std::invalid_argument(std::string(who) + ": state is not normalized (|v|^2 = " +
                                std::to_string(norm2) + ")");
  }
}

// Gram matrix of the shorter side; it has the same nonzero spectrum as rho_A.
Eigen::MatrixXcd smaller_gram(const Eigen::MatrixXcd& m) {
  if (m.rows() <= m.cols()) return m * m.adjoint();
  return m.adjoint() * m;
}

SchmidtSpectrum descending_weights(Eigen::MatrixXcd gram) {
  const Eigen::VectorXd values = dense::hermitian_eigenvalues(std::move(gram));
  SchmidtSpectrum w(values.data(), values.data() + values.size());
  std::reverse(w.begin(), w.end());
  for (double& x : w) x = std::max(x, 0.0);
  return w;
}

}  // namespace

BipartitionMask::BipartitionMask(int n_sites, std::vector<int> sites_a)
    : n_sites_(n_sites), sites_a_(std::move(sites_a)) {
  if (n_sites_ < 2 || n_sites_ > 30) {
    throw ConfigError("bipartition: need 2 <= n_sites <= 30, got " + std::to_string(n_sites_));
  }
  std::vector<bool> in_a(static_cast<std::size_t>(n_sites_), false);
  for (int s : sites_a_) {
    if (s < 0 || s >= n_sites_) {
      throw ConfigError("bipartition: site " + std::to_string(s) + " outside [0, " +
                        std::to_string(n_sites_) + ")");
    }
    if (in_a[s]) throw ConfigError("bipartition: site " + std::to_string(s) + " repeated");
    in_a[s] = true;
  }
  if (sites_a_.empty() || static_cast<int>(sites_a_.size()) == n_sites_) {
    throw ConfigError("bipartition: subsystem A must be a non-empty proper subset");
  }
  for (int s = 0; s < n_sites_; ++s) {
    if (!in_a[s]) sites_b_.push_back(s);
  }
}

BipartitionMask BipartitionMask::half_chain(int n_sites) {
  std::vector<int> a(static_cast<std::size_t>(n_sites / 2));
  std::iota(a.begin(), a.end(), 0);
  return {n_sites, std::move(a)};
}

BipartitionMask BipartitionMask::geometric_half(const LatticeGeometry& geometry) {
  std::vector<int> order(static_cast<std::size_t>(geometry.n_sites));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    const Vec2& pl = geometry.positions[l];
    const Vec2& pr = geometry.positions[r];
    if (std::abs(pl[0] - pr[0]) > 1e-9) return pl[0] < pr[0];
    return pl[1] < pr[1] - 1e-9;
  });
  order.resize(static_cast<std::size_t>(geometry.n_sites / 2));
  std::sort(order.begin(), order.end());
  return {geometry.n_sites, std::move(order)};
}

Eigen::MatrixXcd reshape_bipartite(const StateVector& state, const BipartitionMask& mask) {
  if (static_cast<std::size_t>(state.size()) != hilbert_dimension(mask.n_sites())) {
    throw std::invalid_argument("reshape_bipartite: state dimension does not match the mask");
  }
  const auto rows = static_cast<Eigen::Index>(hilbert_dimension(static_cast<int>(mask.sites_a().size())));
  const auto cols = static_cast<Eigen::Index>(hilbert_dimension(static_cast<int>(mask.sites_b().size())));
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t s = 0; s < static_cast<std::size_t>(state.size()); ++s) {
    m(static_cast<Eigen::Index>(gather_bits(s, mask.sites_a())),
      static_cast<Eigen::Index>(gather_bits(s, mask.sites_b()))) = state[static_cast<Eigen::Index>(s)];
  }
  return m;
}

SchmidtSpectrum reduced_spectrum(const StateVector& state, const BipartitionMask& mask) {
  check_state(state, mask, "reduced_spectrum");
  return descending_weights(smaller_gram(reshape_bipartite(state, mask)));
}

double entropy_bits(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) {
    if (w >= 1e-14) s -= w * std::log2(w);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const StateVector& state, const BipartitionMask& mask) {
  const SchmidtSpectrum w = reduced_spectrum(state, mask);
  return entropy_bits(w);
}

EntropyStatistics summarize_entropies(std::span<const double> entropies, double max_entropy,
                                      int bins) {
  if (entropies.empty()) throw std::invalid_argument("summarize_entropies: no samples");
  if (bins < 1) throw std::invalid_argument("summarize_entropies: bins must be >= 1");
  if (!(max_entropy > 0.0)) throw std::invalid_argument("summarize_entropies: max_entropy <= 0");
  EntropyStatistics out;
  out.sample_count = entropies.size();
  const double n = static_cast<double>(entropies.size());
  out.mean = std::accumulate(entropies.begin(), entropies.end(), 0.0) / n;
  double var = 0.0;
  for (double s : entropies) var += (s - out.mean) * (s - out.mean);
  out.std = std::sqrt(var / n);

  out.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) out.bin_edges[b] = max_entropy * b / bins;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double s : entropies) {
    auto b = static_cast<long>(std::floor(s / max_entropy * bins));
    b = std::clamp<long>(b, 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  out.probabilities.resize(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) out.probabilities[b] = counts[b] / n;
  return out;
}

EntropyStatistics entropy_distribution(std::span<const StateVector> states,
                                       const BipartitionMask& mask, int bins) {
  if (states.empty()) throw std::invalid_argument("entropy_distribution: empty state stream");
  std::vector<double> s;
  s.reserve(states.size());
  for (const StateVector& v : states) s.push_back(von_neumann_entropy(v, mask));
  const auto smaller = std::min(mask.sites_a().size(), mask.sites_b().size());
  return summarize_entropies(s, static_cast<double>(smaller), bins);
}

SubspaceEntropySampler::SubspaceEntropySampler(const StateBlock& basis,
                                               const BipartitionMask& mask, double truncation)
    : degree_(static_cast<int>(basis.cols())) {
  if (degree_ < 1) throw std::invalid_argument("SubspaceEntropySampler: empty basis");
  if (static_cast<std::size_t>(basis.rows()) != hilbert_dimension(mask.n_sites())) {
    throw std::invalid_argument("SubspaceEntropySampler: basis dimension does not match the mask");
  }
  const bool a_smaller = mask.sites_a().size() <= mask.sites_b().size();
  std::vector<Eigen::MatrixXcd> m(static_cast<std::size_t>(degree_));
  for (int d = 0; d < degree_; ++d) {
    const StateVector v = basis.col(d);
    m[d] = reshape_bipartite(v, a_smaller ? mask : mask.complement());
  }
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(m[0].rows(), m[0].rows());
  for (const auto& md : m) k.noalias() += md * md.adjoint();

  // Any normalized superposition has an A-side operator bounded by the span
  // of the eigenvectors of k; small eigenvalues bound the weight dropped.
  const dense::HermitianEigen eig = dense::hermitian_eigen(k, true);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = eig.values.size() - 1; i >= 0; --i) {
    if (eig.values[i] > truncation) {
      kept.push_back(i);
    } else {
      discarded_ += std::max(eig.values[i], 0.0);
    }
  }
  rank_ = static_cast<int>(kept.size());
  Eigen::MatrixXcd q(k.rows(), rank_);
  for (int c = 0; c < rank_; ++c) q.col(c) = eig.vectors.col(kept[c]);

  std::vector<Eigen::MatrixXcd> p(static_cast<std::size_t>(degree_));
  for (int d = 0; d < degree_; ++d) p[d] = q.adjoint() * m[d];
  blocks_.resize(static_cast<std::size_t>(degree_) * degree_);
  for (int d = 0; d < degree_; ++d) {
    for (int e = d; e < degree_; ++e) blocks_[d * degree_ + e] = p[d] * p[e].adjoint();
  }
}

SchmidtSpectrum SubspaceEntropySampler::spectrum(const CoefficientVector& coeffs) const {
  if (coeffs.size() != degree_) {
    throw std::invalid_argument("SubspaceEntropySampler: coefficient count does not match");
  }
  if (rank_ == 0) return {};
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(rank_, rank_);
  Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(rank_, rank_);
  for (int d = 0; d < degree_; ++d) {
    rho.noalias() += std::norm(coeffs[d]) * blocks_[d * degree_ + d];
    for (int e = d + 1; e < degree_; ++e) {
      cross.noalias() += (coeffs[d] * std::conj(coeffs[e])) * blocks_[d * degree_ + e];
    }
  }
  if (degree_ > 1) rho += cross + cross.adjoint();
  return descending_weights(std::move(rho));
}

double SubspaceEntropySampler::entropy(const CoefficientVector& coeffs) const {
  const SchmidtSpectrum w = spectrum(coeffs);
  return entropy_bits(w);
}

std::vector<double> sample_entropies(const SubspaceEntropySampler& sampler, int count,
                                     CoefficientLaw law, std::uint64_t master_seed,
                                     int threads) {
  if (count < 1) throw std::invalid_argument("sample_entropies: count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      const CoefficientVector alpha =
          sample_coefficients(sampler.degree(), law, master_seed, static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = sampler.entropy(alpha);
    }
  };
  const int workers = std::clamp(threads, 1, count);
  std::vector<std::jthread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  return out;
}

}  // namespace degen
