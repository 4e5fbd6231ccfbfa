// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/measurement.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace degen {

namespace {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

Mat2 rotation(Axis axis, bool inverse) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  Mat2 u{};
  switch (axis) {
    case Axis::x:
      u = {{{r, r}, {r, -r}}};
      break;
    case Axis::y:
      u = {{{r, -i * r}, {r, i * r}}};
      break;
    case Axis::z:
      u = {{{1.0, 0.0}, {0.0, 1.0}}};
      break;
  }
  if (inverse) {
    u = {{{std::conj(u[0][0]), std::conj(u[1][0])}, {std::conj(u[0][1]), std::conj(u[1][1])}}};
  }
  return u;
}

void rotate_in_place(Complex* v, std::size_t dim, const Mat2& u) {
  for (std::size_t mask = 1; mask < dim; mask <<= 1) {
    for (std::size_t hi = 0; hi < dim; hi += 2 * mask) {
      for (std::size_t s = hi; s < hi + mask; ++s) {
        const Complex a = v[s];
        const Complex b = v[s | mask];
        v[s] = u[0][0] * a + u[0][1] * b;
        v[s | mask] = u[1][0] * a + u[1][1] * b;
      }
    }
  }
}

std::string encode(std::size_t index, int n_sites) {
  std::string bits(static_cast<std::size_t>(n_sites), '0');
  for (int i = 0; i < n_sites; ++i) {
    if ((index >> i) & 1u) bits[i] = '1';
  }
  return bits;
}

int sites_of(Eigen::Index dim) {
  const auto d = static_cast<std::size_t>(dim);
  if (d < 2 || !std::has_single_bit(d)) {
    throw std::invalid_argument("measurement: state length must be a power of two >= 2");
  }
  return std::countr_zero(d);
}

std::size_t draw_index(const StateVector& state, double u) {
  double acc = 0.0;
  const auto dim = static_cast<std::size_t>(state.size());
  for (std::size_t s = 0; s < dim; ++s) {
    acc += std::norm(state[static_cast<Eigen::Index>(s)]);
    if (u < acc) return s;
  }
  // Rounding can leave acc slightly below u; fall back to the last
  // basis state that carries weight.
  for (std::size_t s = dim; s-- > 0;) {
    if (std::norm(state[static_cast<Eigen::Index>(s)]) > 0.0) return s;
  }
  return dim - 1;
}

}  // namespace

StateVector rotate_basis(const StateVector& state, Axis axis, bool inverse) {
  StateVector out = state;
  sites_of(out.size());
  if (axis != Axis::z) rotate_in_place(out.data(), static_cast<std::size_t>(out.size()), rotation(axis, inverse));
  return out;
}

StateBlock rotate_basis(const StateBlock& states, Axis axis, bool inverse) {
  StateBlock out = states;
  sites_of(out.rows());
  if (axis == Axis::z) return out;
  const Mat2 u = rotation(axis, inverse);
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    rotate_in_place(out.col(c).data(), static_cast<std::size_t>(out.rows()), u);
  }
  return out;
}

MeasurementRecord sample_bitstring(const StateVector& state, RngStream& rng, Axis axis,
                                   long shot_index) {
  const int n = sites_of(state.size());
  const double norm2 = state.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-8) {
    throw std::invalid_argument("sample_bitstring: state is not normalized (|v|^2 = " +
                                std::to_string(norm2) + ")");
  }
  const std::size_t index = draw_index(state, rng.uniform01() * norm2);
  return {shot_index, axis, encode(index, n)};
}

std::vector<MeasurementRecord> single_shot_protocol(const StateBlock& multiplet_basis,
                                                    const ShotOptions& options) {
  if (options.shots < 1) throw std::invalid_argument("single_shot_protocol: shots must be >= 1");
  if (options.reuse < 1) throw std::invalid_argument("single_shot_protocol: reuse must be >= 1");
  if (multiplet_basis.cols() < 1) {
    throw std::invalid_argument("single_shot_protocol: empty multiplet basis");
  }
  // Rotation is linear, so rotating the basis once equals rotating every
  // superposition.
  const StateBlock rotated = rotate_basis(multiplet_basis, options.axis);
  const int degree = static_cast<int>(rotated.cols());
  const long preparations = (options.shots + options.reuse - 1) / options.reuse;

  std::vector<MeasurementRecord> records(static_cast<std::size_t>(options.shots));
  std::atomic<long> next{0};
  auto work = [&] {
    for (long p = next++; p < preparations; p = next++) {
      const CoefficientVector alpha = sample_coefficients(
          degree, options.law, options.master_seed, static_cast<std::uint64_t>(p));
      const StateVector psi = rotated * alpha;
      const long first = p * options.reuse;
      const long last = std::min(options.shots, first + options.reuse);
      for (long shot = first; shot < last; ++shot) {
        RngStream rng(options.master_seed, static_cast<std::uint64_t>(shot), StreamTag::shot);
        records[static_cast<std::size_t>(shot)] = sample_bitstring(psi, rng, options.axis, shot);
      }
    }
  };
  const int workers = static_cast<int>(std::clamp<long>(options.threads, 1, preparations));
  std::vector<std::jthread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  return records;
}

MeasurementTally tally(const std::vector<MeasurementRecord>& records) {
  if (records.empty()) throw std::invalid_argument("tally: no records");
  const std::size_t n = records.front().bitstring.size();
  MeasurementTally t;
  t.up.assign(n, 0);
  t.down.assign(n, 0);
  for (const MeasurementRecord& r : records) {
    if (r.bitstring.size() != n) throw std::invalid_argument("tally: bitstring lengths differ");
    for (std::size_t i = 0; i < n; ++i) {
      if (r.bitstring[i] == '0') {
        ++t.up[i];
      } else if (r.bitstring[i] == '1') {
        ++t.down[i];
      } else {
        throw std::invalid_argument("tally: bitstring contains '" + std::string(1, r.bitstring[i]) + "'");
      }
    }
    ++t.shots;
  }
  return t;
}

std::vector<double> estimate_magnetization(const std::vector<MeasurementRecord>& records) {
  if (records.empty()) throw std::invalid_argument("estimate_magnetization: no records");
  const MeasurementTally t = tally(records);
  std::vector<double> m(t.up.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = 0.5 * static_cast<double>(t.up[i] - t.down[i]) / static_cast<double>(t.shots);
  }
  return m;
}

void write_records(const std::filesystem::path& path,
                   const std::vector<MeasurementRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const MeasurementRecord& r : records) {
    out << r.shot_index << ',' << axis_name(r.axis) << ',' << r.bitstring << '\n';
  }
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

std::vector<MeasurementRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<MeasurementRecord> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string index, axis, bits;
    if (!std::getline(fields, index, ',') || !std::getline(fields, axis, ',') ||
        !std::getline(fields, bits) || bits.find_first_not_of("01") != std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected shot_index,axis,bitstring");
    }
    out.push_back({std::stol(index), parse_axis(axis), bits});
  }
  return out;
}

}  // namespace degen
