// cleanjoint/matrix.hpp

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

// Dense containers shared by every module. All of them validate on
// construction and are immutable afterwards. Class indices are 0-based.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cleanjoint/error.hpp"
#include "cleanjoint/numeric.hpp"

namespace cleanjoint {

using ClassIndex = int;

/// Absolute tolerance for stochasticity checks (row, column and grand sums).
inline constexpr double kStochasticTol = 1e-9;

/// Row-major dense matrix. The public types below wrap one of these.
template <class T>
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Dense(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      detail::fail(ErrorKind::DimensionMismatch,
                   "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                       std::to_string(rows_ * cols_));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Dense&, const Dense&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
T row_sum(const Dense<T>& a, std::size_t r) {
  T s{};
  for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c);
  return s;
}

template <class T>
T col_sum(const Dense<T>& a, std::size_t c) {
  T s{};
  for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, c);
  return s;
}

/// n x m out-of-sample predicted probabilities; entry (k, j) is p(label = j; x_k).
///
/// Entries must be finite. Unless `allow_unnormalized` is set they must also lie
/// in [0, 1]; rows are never required to sum to one.
class ProbMatrix {
 public:
  ProbMatrix(std::size_t rows, std::size_t cols, std::vector<double> data,
             bool allow_unnormalized = false)
      : values_(rows, cols, std::move(data)), allow_unnormalized_(allow_unnormalized) {
    if (rows < 1) detail::fail(ErrorKind::DimensionMismatch, "probability matrix needs at least one row");
    if (cols < 2) detail::fail(ErrorKind::DimensionMismatch, "probability matrix needs at least two classes");
    for (std::size_t k = 0; k < rows; ++k) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double p = values_(k, j);
        if (!std::isfinite(p))
          detail::fail(ErrorKind::NonFiniteEntry, position(k, j));
        if (!allow_unnormalized_ && (p < 0.0 || p > 1.0))
          detail::fail(ErrorKind::ProbabilityOutOfRange,
                       position(k, j) + " is outside [0,1] (pass allow_unnormalized to accept)");
      }
    }
  }

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }
  double operator()(std::size_t k, std::size_t j) const { return values_(k, j); }
  std::span<const double> row(std::size_t k) const { return values_.row(k); }
  const std::vector<double>& data() const { return values_.data(); }
  const Dense<double>& dense() const { return values_; }
  bool allow_unnormalized() const { return allow_unnormalized_; }

 private:
  static std::string position(std::size_t k, std::size_t j) {
    return "entry at row " + std::to_string(k) + ", column " + std::to_string(j);
  }
  Dense<double> values_;
  bool allow_unnormalized_;
};

/// Length-n class labels in [0, m), every class present at least once.
class LabelVector {
 public:
  LabelVector(std::vector<ClassIndex> labels, std::size_t num_classes)
      : labels_(std::move(labels)), sizes_(num_classes, 0) {
    if (labels_.empty()) detail::fail(ErrorKind::DimensionMismatch, "label vector is empty");
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      const ClassIndex y = labels_[k];
      if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
        detail::fail(ErrorKind::LabelOutOfRange, "label " + std::to_string(y) + " at index " +
                                                     std::to_string(k) + " is not in [0, " +
                                                     std::to_string(num_classes) + ")");
      ++sizes_[static_cast<std::size_t>(y)];
    }
    for (std::size_t i = 0; i < num_classes; ++i)
      if (sizes_[i] == 0) detail::fail(ErrorKind::EmptyClass, "class " + std::to_string(i) + " has no examples");
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t num_classes() const { return sizes_.size(); }
  ClassIndex operator[](std::size_t k) const { return labels_[k]; }
  std::span<const ClassIndex> values() const { return labels_; }
  std::size_t class_size(std::size_t i) const { return sizes_[i]; }
  const std::vector<std::size_t>& class_sizes() const { return sizes_; }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<ClassIndex> labels_;
  std::vector<std::size_t> sizes_;
};

enum class CountRole { ConfidentJoint, Confusion };

/// m x m non-negative integer counts indexed [given label][latent label].
class CountMatrix {
 public:
  CountMatrix(std::size_t m, std::vector<std::uint64_t> counts, CountRole role)
      : counts_(m, m, std::move(counts)), role_(role) {}

  std::size_t size() const { return counts_.rows(); }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return counts_(i, j); }
  std::uint64_t row_total(std::size_t i) const { return row_sum(counts_, i); }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts_.data()) t += c;
    return t;
  }
  CountRole role() const { return role_; }
  const Dense<std::uint64_t>& dense() const { return counts_; }

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  Dense<std::uint64_t> counts_;
  CountRole role_;
};

/// m x m joint distribution p(given = i, latent = j): non-negative, sums to one.
class JointMatrix {
 public:
  JointMatrix(std::size_t m, std::vector<double> values) : q_(m, m, std::move(values)) {
    if (m < 2) detail::fail(ErrorKind::DimensionMismatch, "joint needs at least two classes");
    CompensatedSum total;
    for (double v : q_.data()) {
      if (!std::isfinite(v)) detail::fail(ErrorKind::NonFiniteEntry, "joint entry is not finite");
      if (v < 0.0) detail::fail(ErrorKind::InvalidArgument, "joint entry is negative");
      total.add(v);
    }
    if (std::abs(total.value() - 1.0) > kStochasticTol)
      detail::fail(ErrorKind::InvalidArgument,
                   "joint sums to " + std::to_string(total.value()) + ", expected 1");
  }

  std::size_t size() const { return q_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return q_(i, j); }
  double row_total(std::size_t i) const { return row_sum(q_, i); }
  double col_total(std::size_t j) const { return col_sum(q_, j); }
  const std::vector<double>& data() const { return q_.data(); }
  const Dense<double>& dense() const { return q_; }

 private:
  Dense<double> q_;
};

/// Which conditional a ConditionalMatrix holds. Entry (r, c) is always
/// p(outcome r | condition c), so both orientations are column-stochastic.
enum class Conditioning {
  NoiseTransition,  ///< p(given = r | latent = c)
  Mixing,           ///< p(latent = r | given = c)
};

class ConditionalMatrix {
 public:
  ConditionalMatrix(std::size_t m, std::vector<double> values, Conditioning kind)
      : p_(m, m, std::move(values)), kind_(kind) {
    if (m < 2) detail::fail(ErrorKind::DimensionMismatch, "conditional matrix needs at least two classes");
    for (std::size_t c = 0; c < m; ++c) {
      CompensatedSum s;
      for (std::size_t r = 0; r < m; ++r) {
        const double v = p_(r, c);
        if (!std::isfinite(v)) detail::fail(ErrorKind::NonFiniteEntry, "conditional entry is not finite");
        if (v < 0.0) detail::fail(ErrorKind::InvalidArgument, "conditional entry is negative");
        s.add(v);
      }
      if (std::abs(s.value() - 1.0) > kStochasticTol)
        detail::fail(ErrorKind::InvalidArgument,
                     "column " + std::to_string(c) + " sums to " + std::to_string(s.value()));
    }
  }

  std::size_t size() const { return p_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return p_(r, c); }
  Conditioning kind() const { return kind_; }
  const std::vector<double>& data() const { return p_.data(); }
  const Dense<double>& dense() const { return p_; }
  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < size(); ++i) t += p_(i, i);
    return t;
  }

 private:
  Dense<double> p_;
  Conditioning kind_;
};

class PriorVector {
 public:
  explicit PriorVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.size() < 2) detail::fail(ErrorKind::DimensionMismatch, "prior needs at least two classes");
    CompensatedSum s;
    for (double v : p_) {
      if (!std::isfinite(v) || v < 0.0) detail::fail(ErrorKind::InvalidArgument, "prior entry must be finite and >= 0");
      s.add(v);
    }
    if (std::abs(s.value() - 1.0) > kStochasticTol)
      detail::fail(ErrorKind::InvalidArgument, "prior sums to " + std::to_string(s.value()));
  }

  static PriorVector uniform(std::size_t m) { return PriorVector(std::vector<double>(m, 1.0 / static_cast<double>(m))); }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }

 private:
  std::vector<double> p_;
};

// ---------------------------------------------------------------------------
// Validation

/// Checks that a probability matrix and a label vector describe the same data
/// set. Both arguments are already individually valid.
inline void check_inputs(const ProbMatrix& probs, const LabelVector& labels) {
  if (labels.size() != probs.rows())
    detail::fail(ErrorKind::DimensionMismatch, std::to_string(labels.size()) + " labels for " +
                                                   std::to_string(probs.rows()) + " probability rows");
  if (labels.num_classes() != probs.cols())
    detail::fail(ErrorKind::DimensionMismatch, "labels declare " + std::to_string(labels.num_classes()) +
                                                   " classes, probabilities have " + std::to_string(probs.cols()));
}

/// Same check, returning a copy of the pair, so validating twice is a no-op.
inline std::pair<ProbMatrix, LabelVector> validate_inputs(const ProbMatrix& probs, const LabelVector& labels) {
  check_inputs(probs, labels);
  return {probs, labels};
}

struct ValidateOptions {
  bool allow_unnormalized = false;
  /// Drop classes that have no labelled example instead of failing with EmptyClass.
  bool drop_empty_classes = false;
};

struct Inputs {
  ProbMatrix probs;
  LabelVector labels;
  /// class_map[new index] = original column index (identity unless classes were dropped).
  std::vector<ClassIndex> class_map;
  std::vector<std::string> warnings;
};

/// Builds validated inputs from raw row-major probabilities and raw labels.
inline Inputs make_inputs(std::size_t n, std::size_t m, std::vector<double> probs,
                          const std::vector<long long>& labels, const ValidateOptions& opts = {}) {
  if (labels.size() != n)
    detail::fail(ErrorKind::DimensionMismatch,
                 std::to_string(labels.size()) + " labels for " + std::to_string(n) + " probability rows");
  ProbMatrix p(n, m, std::move(probs), opts.allow_unnormalized);

  std::vector<std::size_t> seen(m, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const long long y = labels[k];
    if (y < 0 || static_cast<unsigned long long>(y) >= m)
      detail::fail(ErrorKind::LabelOutOfRange, "label " + std::to_string(y) + " at index " + std::to_string(k) +
                                                   " is not in [0, " + std::to_string(m) + ")");
    ++seen[static_cast<std::size_t>(y)];
  }

  std::vector<ClassIndex> class_map;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i] > 0) {
      class_map.push_back(static_cast<ClassIndex>(i));
    } else if (opts.drop_empty_classes) {
      warnings.push_back("class " + std::to_string(i) + " has no examples and was dropped");
    } else {
      detail::fail(ErrorKind::EmptyClass, "class " + std::to_string(i) + " has no examples");
    }
  }

  if (class_map.size() == m) {
    std::vector<ClassIndex> y(labels.begin(), labels.end());
    return Inputs{std::move(p), LabelVector(std::move(y), m), std::move(class_map), std::move(warnings)};
  }

  const std::size_t kept = class_map.size();
  std::vector<ClassIndex> remap(m, -1);
  for (std::size_t c = 0; c < kept; ++c) remap[static_cast<std::size_t>(class_map[c])] = static_cast<ClassIndex>(c);
  std::vector<double> reduced;
  reduced.reserve(n * kept);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < kept; ++c) reduced.push_back(p(k, static_cast<std::size_t>(class_map[c])));
  std::vector<ClassIndex> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = remap[static_cast<std::size_t>(labels[k])];
  ProbMatrix pr(n, kept, std::move(reduced), opts.allow_unnormalized);
  return Inputs{std::move(pr), LabelVector(std::move(y), kept), std::move(class_map), std::move(warnings)};
}

// ---------------------------------------------------------------------------
// Matrix statistics

/// Fraction of off-diagonal entries whose magnitude is <= `epsilon`.
/// Works for any square matrix type exposing size() and operator()(i, j).
template <class Square>
double sparsity(const Square& q, double epsilon = 0.0) {
  const std::size_t m = q.size();
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && std::abs(q(i, j)) <= epsilon) ++zeros;
  return static_cast<double>(zeros) / static_cast<double>(m * (m - 1));
}

/// Relabels classes: entry (i, j) moves to (perm[i], perm[j]).
inline JointMatrix permute_classes(const JointMatrix& q, std::span<const std::size_t> perm) {
  const std::size_t m = q.size();
  if (perm.size() != m) detail::fail(ErrorKind::DimensionMismatch, "permutation length differs from class count");
  std::vector<double> out(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[perm[i] * m + perm[j]] = q(i, j);
  return JointMatrix(m, std::move(out));
}

}  // namespace cleanjoint
