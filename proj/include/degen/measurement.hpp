// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef DEGEN_MEASUREMENT_HPP
#define DEGEN_MEASUREMENT_HPP

#include "degen/ensemble.hpp"
#include "degen/rng.hpp"
#include "degen/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace degen {

/// One projective shot. bitstring[i] is site i's outcome: '0' for +1/2
/// along `axis`, '1' for -1/2.
struct MeasurementRecord {
  long shot_index = 0;
  Axis axis = Axis::z;
  std::string bitstring;
};

struct MeasurementTally {
  std::vector<long> up;
  std::vector<long> down;
  long shots = 0;
};

/// Applies on every site the unitary taking the S^axis eigenbasis to the
/// computational basis (|+x> -> |0>, |+y> -> |0>); `inverse` applies its
/// adjoint. Axis z is the identity.
StateVector rotate_basis(const StateVector& state, Axis axis, bool inverse = false);
StateBlock rotate_basis(const StateBlock& states, Axis axis, bool inverse = false);

/// Draws one basis index with probability |amplitude|^2. Throws
/// std::invalid_argument when |norm^2 - 1| > 1e-8.
MeasurementRecord sample_bitstring(const StateVector& state, RngStream& rng, Axis axis = Axis::z,
                                   long shot_index = 0);

struct ShotOptions {
  long shots = 8192;
  Axis axis = Axis::z;
  std::uint64_t master_seed = 1;
  CoefficientLaw law = CoefficientLaw::haar_gaussian;
  /// Shots measured on each prepared state; 1 means a fresh state per shot.
  long reuse = 1;
  int threads = 1;
};

/// For every shot: fresh coefficients (stream (master_seed, shot / reuse)),
/// superposition of the multiplet basis, rotation to the measurement axis,
/// one Born sample (stream (master_seed, shot), shot tag). Records come back
/// in shot order whatever the thread count.
std::vector<MeasurementRecord> single_shot_protocol(const StateBlock& multiplet_basis,
                                                    const ShotOptions& options);

MeasurementTally tally(const std::vector<MeasurementRecord>& records);

/// Per-site (p_up - p_down) / 2 from empirical frequencies. Throws
/// std::invalid_argument for an empty record list.
std::vector<double> estimate_magnetization(const std::vector<MeasurementRecord>& records);

/// "shot_index,axis,bitstring" lines, LF endings.
void write_records(const std::filesystem::path& path,
                   const std::vector<MeasurementRecord>& records);
std::vector<MeasurementRecord> read_records(const std::filesystem::path& path);

}  // namespace degen

#endif  // DEGEN_MEASUREMENT_HPP
