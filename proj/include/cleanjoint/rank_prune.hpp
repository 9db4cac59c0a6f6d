// cleanjoint/rank_prune.hpp

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

// Label-error finders. Two families:
//   * off-diagonal readers (CONFUSION, CJ) flag examples whose latent guess
//     disagrees with the given label;
//   * budgeted pruners (PBC, PBNR, CNR) turn n * Qhat into per-class or
//     per-pair counts and take that many examples by probability ranking.
// Every finder returns its flags ordered by a ranking score, ascending, so
// the most suspicious example comes first. Score ties go to the lower index.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cleanjoint/confident_joint.hpp"
#include "cleanjoint/error.hpp"
#include "cleanjoint/joint_estimation.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/numeric.hpp"

namespace cleanjoint {

enum class Method { Confusion, CJ, PBC, PBNR, CNR };
enum class RankRule { SelfConfidence, NormalizedMargin };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Confusion: return "confusion";
    case Method::CJ: return "cj";
    case Method::PBC: return "pbc";
    case Method::PBNR: return "pbnr";
    case Method::CNR: return "cnr";
  }
  return "unknown";
}

inline std::string_view to_string(RankRule r) {
  return r == RankRule::SelfConfidence ? "selfconf" : "margin";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::Confusion, Method::CJ, Method::PBC, Method::PBNR, Method::CNR})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

inline std::optional<RankRule> parse_rank_rule(std::string_view s) {
  if (s == "margin") return RankRule::NormalizedMargin;
  if (s == "selfconf") return RankRule::SelfConfidence;
  return std::nullopt;
}

struct ErrorReport {
  Method method = Method::CJ;
  RankRule rank_rule = RankRule::NormalizedMargin;
  std::vector<std::size_t> flagged;  ///< ascending by score
  std::vector<double> scores;        ///< parallel to `flagged`
};

/// p(given label; x) minus the largest other-class probability.
inline double normalized_margin(std::span<const double> row, ClassIndex label) {
  const auto i = static_cast<std::size_t>(label);
  double other = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < row.size(); ++j)
    if (j != i) other = std::max(other, row[j]);
  return row[i] - other;
}

inline double rank_score(std::span<const double> row, ClassIndex label, RankRule rule) {
  return rule == RankRule::SelfConfidence ? row[static_cast<std::size_t>(label)] : normalized_margin(row, label);
}

/// Orders a flagged set by `rule`. Duplicates collapse to one entry.
inline ErrorReport rank_errors(const ProbMatrix& probs, const LabelVector& labels, std::span<const std::size_t> flagged,
                               RankRule rule, Method method = Method::CJ) {
  check_inputs(probs, labels);
  std::vector<std::size_t> idx(flagged.begin(), flagged.end());
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (!idx.empty() && idx.back() >= probs.rows())
    detail::fail(ErrorKind::InvalidArgument, "flagged index " + std::to_string(idx.back()) + " is out of range");

  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(idx.size());
  for (std::size_t k : idx) keyed.emplace_back(rank_score(probs.row(k), labels[k], rule), k);
  std::sort(keyed.begin(), keyed.end());

  ErrorReport r;
  r.method = method;
  r.rank_rule = rule;
  r.flagged.reserve(keyed.size());
  r.scores.reserve(keyed.size());
  for (const auto& [score, k] : keyed) {
    r.flagged.push_back(k);
    r.scores.push_back(score);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Off-diagonal readers

inline ErrorReport errors_confusion(const ProbMatrix& probs, const LabelVector& labels,
                                    RankRule rule = RankRule::NormalizedMargin) {
  check_inputs(probs, labels);
  std::vector<std::size_t> flagged;
  for (std::size_t k = 0; k < probs.rows(); ++k)
    if (static_cast<ClassIndex>(argmax(probs.row(k))) != labels[k]) flagged.push_back(k);
  return rank_errors(probs, labels, flagged, rule, Method::Confusion);
}

inline ErrorReport errors_cj(const ProbMatrix& probs, const LabelVector& labels, const ConfidentJointResult& cj,
                             RankRule rule = RankRule::NormalizedMargin) {
  check_inputs(probs, labels);
  if (cj.assignment.size() != probs.rows())
    detail::fail(ErrorKind::DimensionMismatch, "bin assignment length differs from example count");
  std::vector<std::size_t> flagged;
  for (std::size_t k = 0; k < probs.rows(); ++k)
    if (cj.assignment[k] != kUnassigned && cj.assignment[k] != labels[k]) flagged.push_back(k);
  return rank_errors(probs, labels, flagged, rule, Method::CJ);
}

inline ErrorReport errors_cj(const ProbMatrix& probs, const LabelVector& labels,
                             RankRule rule = RankRule::NormalizedMargin) {
  return errors_cj(probs, labels, confident_joint(probs, labels), rule);
}

// ---------------------------------------------------------------------------
// Budgeted pruners

/// n * mass rounded half-up and clamped to [0, cap].
inline std::size_t prune_budget(std::size_t n, double mass, std::size_t cap) {
  const long long k = round_half_up(static_cast<double>(n) * mass);
  if (k <= 0) return 0;
  return std::min(static_cast<std::size_t>(k), cap);
}

namespace detail {
inline void check_joint_shape(const ProbMatrix& probs, const JointMatrix& q) {
  if (q.size() != probs.cols())
    fail(ErrorKind::DimensionMismatch, "joint is " + std::to_string(q.size()) + "x" + std::to_string(q.size()) +
                                           " but there are " + std::to_string(probs.cols()) + " classes");
}

inline std::vector<std::vector<std::size_t>> members_by_class(const LabelVector& labels) {
  std::vector<std::vector<std::size_t>> members(labels.num_classes());
  for (std::size_t k = 0; k < labels.size(); ++k) members[static_cast<std::size_t>(labels[k])].push_back(k);
  return members;
}
}  // namespace detail

/// Per-class selections of prune-by-class: the k_i lowest self-confidence
/// examples of each class, k_i = round(n * off-diagonal mass of row i).
inline std::vector<std::vector<std::size_t>> prune_by_class_selection(const ProbMatrix& probs, const LabelVector& labels,
                                                                      const JointMatrix& q) {
  check_inputs(probs, labels);
  detail::check_joint_shape(probs, q);
  const std::size_t n = probs.rows();
  const std::size_t m = probs.cols();
  auto members = detail::members_by_class(labels);
  std::vector<std::vector<std::size_t>> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) off += q(i, j);
    const std::size_t budget = prune_budget(n, off, members[i].size());
    auto& pool = members[i];
    std::stable_sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) { return probs(a, i) < probs(b, i); });
    out[i].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(budget));
  }
  return out;
}

struct PairSelection {
  ClassIndex given;
  ClassIndex latent;
  std::vector<std::size_t> examples;
};

/// Per-pair selections of prune-by-noise-rate: for every off-diagonal (i, j),
/// the round(n * Qhat(i, j)) examples labelled i with the largest margin
/// p_j - p_i. Selections may overlap across pairs.
inline std::vector<PairSelection> prune_by_noise_rate_selection(const ProbMatrix& probs, const LabelVector& labels,
                                                                const JointMatrix& q) {
  check_inputs(probs, labels);
  detail::check_joint_shape(probs, q);
  const std::size_t n = probs.rows();
  const std::size_t m = probs.cols();
  const auto members = detail::members_by_class(labels);
  std::vector<PairSelection> out;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const std::size_t budget = prune_budget(n, q(i, j), members[i].size());
      PairSelection sel{static_cast<ClassIndex>(i), static_cast<ClassIndex>(j), {}};
      if (budget > 0) {
        std::vector<std::size_t> pool = members[i];
        std::stable_sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
          return probs(a, j) - probs(a, i) > probs(b, j) - probs(b, i);
        });
        sel.examples.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(budget));
      }
      out.push_back(std::move(sel));
    }
  }
  return out;
}

inline ErrorReport errors_pbc(const ProbMatrix& probs, const LabelVector& labels, const JointMatrix& q,
                              RankRule rule = RankRule::NormalizedMargin) {
  std::vector<std::size_t> flagged;
  for (const auto& sel : prune_by_class_selection(probs, labels, q)) flagged.insert(flagged.end(), sel.begin(), sel.end());
  return rank_errors(probs, labels, flagged, rule, Method::PBC);
}

inline ErrorReport errors_pbnr(const ProbMatrix& probs, const LabelVector& labels, const JointMatrix& q,
                               RankRule rule = RankRule::NormalizedMargin) {
  std::vector<std::size_t> flagged;
  for (const auto& sel : prune_by_noise_rate_selection(probs, labels, q))
    flagged.insert(flagged.end(), sel.examples.begin(), sel.examples.end());
  return rank_errors(probs, labels, flagged, rule, Method::PBNR);
}

/// Examples flagged by both prune-by-class and prune-by-noise-rate.
inline ErrorReport errors_cnr(const ProbMatrix& probs, const LabelVector& labels, const JointMatrix& q,
                              RankRule rule = RankRule::NormalizedMargin) {
  auto a = errors_pbc(probs, labels, q, rule).flagged;
  auto b = errors_pbnr(probs, labels, q, rule).flagged;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::size_t> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return rank_errors(probs, labels, both, rule, Method::CNR);
}

/// Runs one method end to end: thresholds, confident joint and, for the
/// budgeted pruners, the calibrated joint.
inline ErrorReport find_errors(const ProbMatrix& probs, const LabelVector& labels, Method method,
                               RankRule rule = RankRule::NormalizedMargin, std::vector<std::string>* warnings = nullptr) {
  switch (method) {
    case Method::Confusion:
      return errors_confusion(probs, labels, rule);
    case Method::CJ:
      return errors_cj(probs, labels, rule);
    default:
      break;
  }
  const auto cj = confident_joint(probs, labels);
  const JointMatrix q = calibrate(cj.counts, labels, {}, warnings);
  if (method == Method::PBC) return errors_pbc(probs, labels, q, rule);
  if (method == Method::PBNR) return errors_pbnr(probs, labels, q, rule);
  return errors_cnr(probs, labels, q, rule);
}

struct PruneResult {
  std::vector<std::size_t> kept;
  std::vector<double> class_weights;
};

/// Removes the flagged examples and reports the per-class loss weights.
inline PruneResult prune(const LabelVector& labels, const ErrorReport& report, const JointMatrix& q) {
  const std::size_t n = labels.size();
  std::vector<bool> drop(n, false);
  for (std::size_t k : report.flagged) {
    if (k >= n) detail::fail(ErrorKind::InvalidArgument, "flagged index " + std::to_string(k) + " is out of range");
    drop[k] = true;
  }
  PruneResult r;
  for (std::size_t k = 0; k < n; ++k)
    if (!drop[k]) r.kept.push_back(k);
  r.class_weights = class_weights(q);
  return r;
}

}  // namespace cleanjoint
