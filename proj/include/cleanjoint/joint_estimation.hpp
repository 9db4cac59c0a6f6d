// cleanjoint/joint_estimation.hpp

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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cleanjoint/error.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/numeric.hpp"

namespace cleanjoint {

struct CalibrateOptions {
  /// Replace an all-zero count row by a one-hot diagonal row (and warn)
  /// instead of failing with ZeroRow.
  bool zero_row_fallback = true;
};

/// Calibrates counts into a joint distribution.
///
/// Each row of `counts` is rescaled so it sums to the number of examples given
/// that label, then the whole matrix is divided by its total. The result has
/// row sums |X_i| / n and a grand sum of one.
inline JointMatrix calibrate(const CountMatrix& counts, std::span<const std::size_t> class_sizes,
                             const CalibrateOptions& opts = {}, std::vector<std::string>* warnings = nullptr) {
  const std::size_t m = counts.size();
  if (class_sizes.size() != m)
    detail::fail(ErrorKind::DimensionMismatch, "class sizes have length " + std::to_string(class_sizes.size()) +
                                                   ", count matrix is " + std::to_string(m) + "x" + std::to_string(m));
  std::vector<double> scaled(m * m, 0.0);
  CompensatedSum grand;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t size_i = class_sizes[i];
    if (size_i == 0) detail::fail(ErrorKind::EmptyClass, "class " + std::to_string(i) + " has no examples");
    const std::uint64_t row_total = counts.row_total(i);
    if (row_total > size_i)
      detail::fail(ErrorKind::InvalidArgument, "row " + std::to_string(i) + " counts " + std::to_string(row_total) +
                                                   " examples but the class has " + std::to_string(size_i));
    if (row_total == 0) {
      if (!opts.zero_row_fallback)
        detail::fail(ErrorKind::ZeroRow, "no example labelled " + std::to_string(i) + " was counted");
      if (warnings)
        warnings->push_back("ZeroRow: no example labelled " + std::to_string(i) +
                            " was confidently counted; row replaced by the diagonal");
      scaled[i * m + i] = static_cast<double>(size_i);
      grand.add(scaled[i * m + i]);
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double v = static_cast<double>(counts(i, j)) / static_cast<double>(row_total) * static_cast<double>(size_i);
      scaled[i * m + j] = v;
      grand.add(v);
    }
  }
  const double total = grand.value();
  for (double& v : scaled) v /= total;
  return JointMatrix(m, std::move(scaled));
}

inline JointMatrix calibrate(const CountMatrix& counts, const LabelVector& labels, const CalibrateOptions& opts = {},
                             std::vector<std::string>* warnings = nullptr) {
  return calibrate(counts, labels.class_sizes(), opts, warnings);
}

struct LatentEstimates {
  PriorVector latent_prior;            ///< p(latent = j), column sums of the joint
  ConditionalMatrix noise_transition;  ///< p(given = i | latent = j)
  ConditionalMatrix mixing;            ///< p(latent = j | given = i), stored (j, i)
  PriorVector observed_prior;          ///< p(given = i), row sums of the joint
};

inline LatentEstimates latent_estimates(const JointMatrix& q) {
  const std::size_t m = q.size();
  std::vector<double> latent(m), observed(m);
  for (std::size_t j = 0; j < m; ++j) {
    latent[j] = q.col_total(j);
    if (!(latent[j] > 0.0))
      detail::fail(ErrorKind::DegenerateClass, "latent prior of class " + std::to_string(j) + " is zero");
  }
  for (std::size_t i = 0; i < m; ++i) {
    observed[i] = q.row_total(i);
    if (!(observed[i] > 0.0))
      detail::fail(ErrorKind::DegenerateClass, "observed prior of class " + std::to_string(i) + " is zero");
  }
  std::vector<double> transition(m * m), mixing(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      transition[i * m + j] = q(i, j) / latent[j];
      mixing[j * m + i] = q(i, j) / observed[i];
    }
  }
  return LatentEstimates{PriorVector(std::move(latent)),
                         ConditionalMatrix(m, std::move(transition), Conditioning::NoiseTransition),
                         ConditionalMatrix(m, std::move(mixing), Conditioning::Mixing),
                         PriorVector(std::move(observed))};
}

/// Loss weights for training on pruned data: p(latent = i) / p(given = i, latent = i).
inline std::vector<double> class_weights(const JointMatrix& q) {
  const std::size_t m = q.size();
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(q(i, i) > 0.0)) detail::fail(ErrorKind::ZeroDiagonal, "joint diagonal entry " + std::to_string(i) + " is zero");
    w[i] = q.col_total(i) / q(i, i);
  }
  return w;
}

/// Joint frequency of (given, latent) pairs in a labelled sample.
inline JointMatrix empirical_joint(std::span<const ClassIndex> given, std::span<const ClassIndex> latent, std::size_t m) {
  if (given.size() != latent.size() || given.empty())
    detail::fail(ErrorKind::DimensionMismatch, "label sequences differ in length or are empty");
  std::vector<std::uint64_t> counts(m * m, 0);
  for (std::size_t k = 0; k < given.size(); ++k) {
    if (given[k] < 0 || latent[k] < 0 || static_cast<std::size_t>(given[k]) >= m || static_cast<std::size_t>(latent[k]) >= m)
      detail::fail(ErrorKind::LabelOutOfRange, "label at index " + std::to_string(k) + " is out of range");
    ++counts[static_cast<std::size_t>(given[k]) * m + static_cast<std::size_t>(latent[k])];
  }
  std::vector<double> q(m * m);
  const double n = static_cast<double>(given.size());
  for (std::size_t x = 0; x < q.size(); ++x) q[x] = static_cast<double>(counts[x]) / n;
  return JointMatrix(m, std::move(q));
}

/// Population joint p(given = i, latent = j) = T(i, j) * prior(j).
inline JointMatrix joint_from_transition(const ConditionalMatrix& transition, const PriorVector& prior) {
  const std::size_t m = transition.size();
  if (prior.size() != m) detail::fail(ErrorKind::DimensionMismatch, "prior length differs from class count");
  std::vector<double> q(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) q[i * m + j] = transition(i, j) * prior[j];
  return JointMatrix(m, std::move(q));
}

}  // namespace cleanjoint
