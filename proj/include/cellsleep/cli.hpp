// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace cellsleep {

// Exit codes: 0 success, 1 usage error, 2 bad input data, 3 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitRuntime = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cellsleep
