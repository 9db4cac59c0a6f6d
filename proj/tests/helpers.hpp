// tests/helpers.hpp

// Copyright 2026  cleanjoint authors

// See ../COPYING for clarification regarding multiple authors
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

// Conversions between oracle containers and library types.

#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "cleanjoint/cleanjoint.hpp"
#include "oracles.hpp"

namespace testing_util {

inline cleanjoint::ProbMatrix to_probs(const oracle::Matrix& p, bool allow_unnormalized = false) {
  std::vector<double> flat;
  for (const auto& r : p) flat.insert(flat.end(), r.begin(), r.end());
  return cleanjoint::ProbMatrix(p.size(), p.front().size(), flat, allow_unnormalized);
}

inline oracle::Matrix to_rows(const cleanjoint::Dense<double>& a) {
  oracle::Matrix out(a.rows(), std::vector<double>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[r][c] = a(r, c);
  return out;
}

inline oracle::Matrix to_rows(const cleanjoint::ProbMatrix& p) { return to_rows(p.dense()); }

inline std::vector<int> to_ints(std::span<const cleanjoint::ClassIndex> v) { return {v.begin(), v.end()}; }

inline std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

inline cleanjoint::JointMatrix to_joint(const oracle::Matrix& q) {
  std::vector<double> flat;
  for (const auto& r : q) flat.insert(flat.end(), r.begin(), r.end());
  return cleanjoint::JointMatrix(q.size(), flat);
}

/// The four-example, two-class data set used throughout the tests.
inline cleanjoint::ProbMatrix demo_probs() {
  return cleanjoint::ProbMatrix(4, 2, {0.9, 0.1, 0.4, 0.6, 0.2, 0.8, 0.3, 0.7});
}
inline cleanjoint::LabelVector demo_labels() { return cleanjoint::LabelVector({0, 0, 1, 1}, 2); }

}  // namespace testing_util
