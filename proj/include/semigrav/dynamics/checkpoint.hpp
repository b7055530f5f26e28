#pragma once

#include "semigrav/dynamics/grid.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace semigrav::dynamics {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary container, little-endian:
///   bytes 0-7    magic "SGRVCKPT"
///   bytes 8-11   uint32 format version
///   bytes 12-19  uint64 header length L
///   L bytes      UTF-8 JSON header: grid, masses, time, config echo, and per branch
///                its label and trajectory history [[t, q1, q2], ...]
///   payload      per branch in header order, n*n complex doubles (re, im),
///                x1 fastest: index i1 + n * i2
struct Checkpoint {
    BranchedWave state;
    nlohmann::json config;
};

void write_checkpoint(const std::string& path, const BranchedWave& state, const nlohmann::json& config = {});
/// Throws InvalidStateError on a malformed or truncated file.
Checkpoint read_checkpoint(const std::string& path);

}  // namespace semigrav::dynamics
