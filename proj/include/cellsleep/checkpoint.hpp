// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cellsleep/policy_net.hpp"

namespace cellsleep {

// File layout: a text header of "key value" lines
//
//   cellsleep-checkpoint
//   version 1
//   arch kind=ppo inputs=60 hidden=64,64 actions=12 activation=tanh
//   count 8909
//   agent ppo
//   seed 7
//   checksum 0123456789abcdef
//   payload
//
// followed by `count` IEEE-754 doubles, little-endian. The checksum is
// FNV-1a 64 over the payload bytes.
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  PolicyParameters params;
  std::uint64_t seed = 0;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(const std::string& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace cellsleep
