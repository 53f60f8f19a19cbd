//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_CLI_HPP_
#define DECOYFORGE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace decoyforge {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitDivergence = 3 };

/// Runs the command line; args[0] is the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

std::string version_string();

}  // namespace decoyforge

#endif  // DECOYFORGE_CLI_HPP_
