//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_ERROR_HPP_
#define DECOYFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace decoyforge {

enum class ErrorKind {
  // structure-io
  MalformedRecord,
  EmptyStructure,
  // curation / decoys
  UnknownElement,
  LengthMismatch,
  NoValidPose,
  AtomNameMismatch,
  AmbiguousAtomNames,
  // graphs
  EmptyPocket,
  // dataset store
  Io,
  FormatVersion,
  InsufficientDecoys,
  UnknownComplex,
  PoseOutOfRange,
  EmptyDataset,
  // autodiff
  ShapeMismatch,
  IndexOutOfRange,
  NotAScalar,
  GraphFreed,
  // encoder / objective
  NonFiniteActivation,
  ZeroVector,
  NoNegatives,
  NoPositivePairsInBatch,
  DmaxUnavailable,
  NonFiniteScore,
  // trainer
  DivergedLoss,
  EmptySplit,
  ZeroVariance,
  // configuration
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) { }

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace decoyforge

#endif  // DECOYFORGE_ERROR_HPP_
