//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_CHECKPOINT_HPP_
#define DECOYFORGE_CHECKPOINT_HPP_

#include <string>

#include "decoyforge/encoder.hpp"

namespace decoyforge {

/// Serialized encoder: magic, encoder config (JSON), named f64 parameters.
std::string checkpoint_bytes(const Encoder &model);
Encoder checkpoint_from_bytes(std::string_view data);

/// Throws Error{Io} or Error{FormatVersion}.
void save_checkpoint(const std::string &path, const Encoder &model);
Encoder load_checkpoint(const std::string &path);

}  // namespace decoyforge

#endif  // DECOYFORGE_CHECKPOINT_HPP_
