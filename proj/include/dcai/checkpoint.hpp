// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcai/models.hpp"

namespace dcai {

/// Binary model checkpoint.
///
/// Layout (all integers little-endian):
///   "DCAI" | version u16 | kind u8 | payload length u64 | payload | crc32(payload) u32
/// Kind codes: 1 perceptron, 2 naive Bayes, 3 dense nearest centroid, 4 sparse nearest centroid.
using ModelCheckpoint = std::vector<std::uint8_t>;

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ModelCheckpoint snapshot(const Model& model);

/// Throws CheckpointError on bad magic, unknown version or kind, truncation, or checksum mismatch.
Model restore(std::span<const std::uint8_t> bytes);

/// Human-readable JSON dump of the full model state, for debugging.
std::string to_text(const Model& model);

}  // namespace dcai
