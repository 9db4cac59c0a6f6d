// cleanjoint/error.hpp

// Copyright 2026  cleanjoint authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cleanjoint {

/// Every failure the library reports is one of these.
enum class ErrorKind {
  // input validation
  DimensionMismatch,
  LabelOutOfRange,
  EmptyClass,
  NonFiniteEntry,
  ProbabilityOutOfRange,
  InvalidArgument,
  // estimation
  ZeroRow,
  DegenerateClass,
  ZeroDiagonal,
  ShapeMismatch,
  // synthesis
  InfeasibleSpec,
  DegenerateRange,
  // io
  Io,
  Parse,
  // broken internal invariant
  Internal,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::DegenerateClass: return "DegenerateClass";
    case ErrorKind::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for an error kind: 1 I/O or parse, 2 validation or spec,
/// 3 internal invariant breach.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Parse:
      return 1;
    case ErrorKind::Internal:
      return 3;
    default:
      return 2;
  }
}

namespace detail {
[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }
}  // namespace detail

}  // namespace cleanjoint
