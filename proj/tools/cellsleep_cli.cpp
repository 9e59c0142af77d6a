// Copyright 2026 The cellsleep Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cellsleep/cli.hpp"

int main(int argc, char** argv) {
  return cellsleep::run_cli(argc, argv, std::cout, std::cerr);
}
