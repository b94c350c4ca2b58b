#pragma once

// Binary snapshot of a state, little-endian throughout:
//
//   "BDNA" | u32 version | u8 geometry (0 sphere, 1 torus) | u32 truncation |
//   f64 t | f64 nu | f64 alpha | f64 sigma | u64 coefficient count |
//   f64 coefficients[count] | f64 harmonic[2] (torus only) | u32 CRC-32
//
// The CRC covers the coefficient and harmonic bytes.

#include <cstdint>
#include <string>

#include "bardina/dynamics.hpp"

namespace bardina::harness {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  GeometryKind geometry = GeometryKind::sphere;
  int truncation = 0;
  double t = 0.0;
  double nu = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  VelocityState state;
};

std::string encode_snapshot(const Snapshot& snap);
/// Throws CorruptSnapshotError on a bad magic, version, length or CRC.
Snapshot decode_snapshot(const std::string& bytes);

void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

/// Throws SnapshotMismatchError unless geometry and truncation match the plan.
void check_snapshot(const Snapshot& snap, const BasisPlan& plan);

}  // namespace bardina::harness
