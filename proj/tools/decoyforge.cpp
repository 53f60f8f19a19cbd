//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>

#include "decoyforge/cli.hpp"

int main(int argc, char **argv) {
  return decoyforge::run_cli({ argv, argv + argc }, std::cout, std::cerr);
}
