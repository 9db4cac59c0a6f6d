// cleanjoint/confident_joint.hpp

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

// Per-class thresholds, the confident joint and the argmax confusion baseline.
//
// The confident joint partitions examples into bins (given label i, latent
// label j). Example x with given label i lands in bin (i, j) when j is the
// only class whose predicted probability reaches its threshold t_j. When more
// than one class passes (a collision) the latent guess is the argmax over the
// whole probability row. Examples where no class passes are not counted.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cleanjoint/error.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/numeric.hpp"

namespace cleanjoint {

/// t_j, the mean self-confidence of the examples labelled j.
class ThresholdVector {
 public:
  explicit ThresholdVector(std::vector<double> t) : t_(std::move(t)) {
    for (double v : t_)
      if (!std::isfinite(v)) detail::fail(ErrorKind::NonFiniteEntry, "threshold is not finite");
  }
  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t j) const { return t_[j]; }
  const std::vector<double>& values() const { return t_; }

 private:
  std::vector<double> t_;
};

/// Mean self-confidence per class, accumulated in example order.
inline ThresholdVector compute_thresholds(const ProbMatrix& probs, const LabelVector& labels) {
  check_inputs(probs, labels);
  std::vector<ShiftedMean> acc(probs.cols());
  for (std::size_t k = 0; k < probs.rows(); ++k) {
    const auto y = static_cast<std::size_t>(labels[k]);
    acc[y].add(probs(k, y));
  }
  std::vector<double> t(probs.cols());
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (acc[j].count() == 0) detail::fail(ErrorKind::EmptyClass, "class " + std::to_string(j) + " has no examples");
    t[j] = acc[j].value();
  }
  return ThresholdVector(std::move(t));
}

inline constexpr ClassIndex kUnassigned = -1;

/// Latent-class guess for one probability row, or kUnassigned when no class
/// reaches its threshold. Sets `collided` when more than one class does.
inline ClassIndex confident_latent(std::span<const double> row, const ThresholdVector& t, bool* collided = nullptr) {
  std::size_t passed = 0;
  std::size_t last = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] >= t[j]) {
      ++passed;
      last = j;
    }
  }
  if (collided) *collided = passed > 1;
  if (passed == 0) return kUnassigned;
  if (passed == 1) return static_cast<ClassIndex>(last);
  return static_cast<ClassIndex>(argmax(row));
}

struct ConfidentJointResult {
  CountMatrix counts;
  /// Latent bin per example, kUnassigned when the example is counted nowhere.
  std::vector<ClassIndex> assignment;
  std::size_t collisions = 0;
};

inline ConfidentJointResult confident_joint(const ProbMatrix& probs, const LabelVector& labels,
                                            const ThresholdVector& thresholds) {
  check_inputs(probs, labels);
  const std::size_t m = probs.cols();
  if (thresholds.size() != m)
    detail::fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(m) + " thresholds, got " +
                                                   std::to_string(thresholds.size()));
  std::vector<std::uint64_t> counts(m * m, 0);
  std::vector<ClassIndex> assignment(probs.rows(), kUnassigned);
  std::size_t collisions = 0;
  for (std::size_t k = 0; k < probs.rows(); ++k) {
    bool collided = false;
    const ClassIndex j = confident_latent(probs.row(k), thresholds, &collided);
    if (collided) ++collisions;
    if (j == kUnassigned) continue;
    assignment[k] = j;
    ++counts[static_cast<std::size_t>(labels[k]) * m + static_cast<std::size_t>(j)];
  }
  return {CountMatrix(m, std::move(counts), CountRole::ConfidentJoint), std::move(assignment), collisions};
}

inline ConfidentJointResult confident_joint(const ProbMatrix& probs, const LabelVector& labels) {
  return confident_joint(probs, labels, compute_thresholds(probs, labels));
}

/// argmax of every row, ties to the lowest class index.
inline std::vector<ClassIndex> argmax_labels(const ProbMatrix& probs) {
  std::vector<ClassIndex> out(probs.rows());
  for (std::size_t k = 0; k < probs.rows(); ++k) out[k] = static_cast<ClassIndex>(argmax(probs.row(k)));
  return out;
}

/// Counts of (given label, argmax prediction).
inline CountMatrix confusion_joint(const ProbMatrix& probs, const LabelVector& labels) {
  check_inputs(probs, labels);
  const std::size_t m = probs.cols();
  std::vector<std::uint64_t> counts(m * m, 0);
  for (std::size_t k = 0; k < probs.rows(); ++k)
    ++counts[static_cast<std::size_t>(labels[k]) * m + argmax(probs.row(k))];
  return CountMatrix(m, std::move(counts), CountRole::Confusion);
}

}  // namespace cleanjoint
