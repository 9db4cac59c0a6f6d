// cleanjoint/noise_lab.hpp

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

// Synthetic label noise: random noise transition matrices with a prescribed
// trace and sparsity, class-conditional label flipping, and predicted
// probabilities that are ideal or diffracted in the two structured ways under
// which the confident joint keeps its bins. Also the learnability bounds.
//
// All randomness flows through cleanjoint::Rng, so a seed reproduces every
// matrix, flip and probability bit for bit.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cleanjoint/confident_joint.hpp"
#include "cleanjoint/error.hpp"
#include "cleanjoint/joint_estimation.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/numeric.hpp"
#include "cleanjoint/rng.hpp"

namespace cleanjoint {

// ---------------------------------------------------------------------------
// Noise transition matrices

struct NoiseSpec {
  std::size_t m = 2;
  double trace = 2.0;     ///< target trace of p(given | latent), in (1, m]
  double sparsity = 0.0;  ///< target fraction of zero off-diagonal entries, in [0, 1)
  std::uint64_t seed = 0;
  /// p(latent = j) for sampling latent labels; empty means uniform.
  std::vector<double> latent_prior;
  /// Make every diagonal entry strictly the largest in its row and column.
  bool dominance = true;
};

inline PriorVector latent_prior(const NoiseSpec& spec) {
  return spec.latent_prior.empty() ? PriorVector::uniform(spec.m) : PriorVector(spec.latent_prior);
}

inline constexpr int kMaxNoiseAttempts = 1000;

/// Relative gap kept between a diagonal entry and any off-diagonal entry in
/// its row or column when dominance is requested.
inline constexpr double kDominanceGap = 1e-3;

namespace detail {

/// Spreads `mass` over the slots in proportion to `weight`, never exceeding
/// `cap`. Returns false when the caps cannot absorb the mass.
inline bool capped_fill(double mass, std::span<const double> weight, std::span<const double> cap, std::span<double> out) {
  const std::size_t k = weight.size();
  std::vector<bool> fixed(k, false);
  double remaining = mass;
  for (std::size_t round = 0; round <= k; ++round) {
    double wsum = 0.0;
    for (std::size_t s = 0; s < k; ++s)
      if (!fixed[s]) wsum += weight[s];
    if (wsum <= 0.0) return remaining <= 1e-15;
    bool clamped = false;
    for (std::size_t s = 0; s < k; ++s) {
      if (fixed[s]) continue;
      const double share = remaining * weight[s] / wsum;
      if (share > cap[s]) {
        out[s] = cap[s];
        fixed[s] = true;
        remaining -= cap[s];
        clamped = true;
      }
    }
    if (!clamped) {
      for (std::size_t s = 0; s < k; ++s)
        if (!fixed[s]) out[s] = remaining * weight[s] / wsum;
      return true;
    }
  }
  return false;
}

inline bool is_dominant(const Dense<double>& t, bool strict_gap) {
  const std::size_t m = t.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double v = t(i, j);
      if (strict_gap ? !(v < t(i, i) && v < t(j, j)) : (v > t(i, i) || v > t(j, j))) return false;
    }
  }
  return true;
}

}  // namespace detail

/// True when every diagonal entry is strictly larger than the other entries
/// of its row and of its column.
inline bool diagonal_dominates(const ConditionalMatrix& t) { return detail::is_dominant(t.dense(), true); }

/// Random column-stochastic p(given | latent) with the requested trace and
/// off-diagonal zero fraction.
///
/// The diagonal deficit m - trace is split across columns in proportion to
/// random weights. Zeros are placed on off-diagonal slots in random order,
/// skipping any slot whose column could no longer carry its noise mass. The
/// remaining slots get flat-Dirichlet shares of the column's noise mass,
/// capped below the diagonal entries of their row and column when dominance is
/// requested. Failed attempts are retried up to kMaxNoiseAttempts times.
inline ConditionalMatrix gen_noise_matrix(const NoiseSpec& spec) {
  const std::size_t m = spec.m;
  const double md = static_cast<double>(m);
  if (m < 2) detail::fail(ErrorKind::InvalidArgument, "need at least two classes");
  if (!std::isfinite(spec.trace) || spec.trace <= 1.0)
    detail::fail(ErrorKind::InfeasibleSpec, "trace must exceed 1 for the problem to be learnable");
  if (spec.trace > md) detail::fail(ErrorKind::InfeasibleSpec, "trace cannot exceed the class count");
  if (!(spec.sparsity >= 0.0 && spec.sparsity < 1.0))
    detail::fail(ErrorKind::InfeasibleSpec, "sparsity must lie in [0, 1)");

  if (spec.trace == md) {
    std::vector<double> eye(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) eye[i * m + i] = 1.0;
    return ConditionalMatrix(m, std::move(eye), Conditioning::NoiseTransition);
  }

  const double deficit = md - spec.trace;
  const std::size_t slots = m * (m - 1);
  const auto zeros_wanted = static_cast<std::size_t>(round_half_up(spec.sparsity * static_cast<double>(slots)));
  Rng rng(spec.seed);

  for (int attempt = 0; attempt < kMaxNoiseAttempts; ++attempt) {
    std::vector<double> w(m);
    double wsum = 0.0;
    for (auto& x : w) {
      x = 0.5 + rng.uniform();
      wsum += x;
    }
    std::vector<double> diag(m);
    bool ok = true;
    for (std::size_t j = 0; j < m; ++j) {
      diag[j] = 1.0 - deficit * w[j] / wsum;
      if (!(diag[j] > 0.0)) ok = false;
    }
    if (!ok) continue;

    Dense<double> cap(m, m, 0.0);
    std::vector<double> cap_total(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        cap(i, j) = spec.dominance ? std::min(diag[i], diag[j]) * (1.0 - kDominanceGap) : 1.0;
        cap_total[j] += cap(i, j);
      }
    }
    for (std::size_t j = 0; j < m; ++j)
      if (cap_total[j] <= (1.0 - diag[j]) * (1.0 + 1e-12)) ok = false;
    if (!ok) continue;

    std::vector<std::pair<std::size_t, std::size_t>> order;
    order.reserve(slots);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) order.emplace_back(i, j);
    rng.shuffle(order);
    Dense<char> is_zero(m, m, 0);
    std::size_t placed = 0;
    for (const auto& [i, j] : order) {
      if (placed == zeros_wanted) break;
      if (cap_total[j] - cap(i, j) <= (1.0 - diag[j]) * (1.0 + 1e-12)) continue;
      is_zero(i, j) = 1;
      cap_total[j] -= cap(i, j);
      ++placed;
    }
    if (placed != zeros_wanted) continue;

    Dense<double> t(m, m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      t(j, j) = diag[j];
      std::vector<std::size_t> rows;
      std::vector<double> weight, caps;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == j || is_zero(i, j)) continue;
        rows.push_back(i);
        weight.push_back(rng.exponential());
        caps.push_back(cap(i, j));
      }
      std::vector<double> fill(rows.size(), 0.0);
      if (!detail::capped_fill(1.0 - diag[j], weight, caps, fill)) {
        ok = false;
        break;
      }
      for (std::size_t s = 0; s < rows.size(); ++s) t(rows[s], j) = fill[s];
    }
    if (!ok) continue;
    if (spec.dominance && !detail::is_dominant(t, true)) continue;
    return ConditionalMatrix(m, t.data(), Conditioning::NoiseTransition);
  }
  detail::fail(ErrorKind::InfeasibleSpec, "no noise matrix with trace " + std::to_string(spec.trace) + " and sparsity " +
                                              std::to_string(spec.sparsity) + " found in " +
                                              std::to_string(kMaxNoiseAttempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Labels

/// n latent labels drawn to match `prior`: class sizes by largest remainder
/// (at least one example per class when n >= m), then shuffled.
inline std::vector<ClassIndex> sample_latent_labels(std::size_t n, const PriorVector& prior, std::uint64_t seed) {
  const std::size_t m = prior.size();
  if (n < m) detail::fail(ErrorKind::InvalidArgument, "need at least one example per class");
  std::vector<std::size_t> count(m);
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t used = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact = prior[i] * static_cast<double>(n);
    count[i] = static_cast<std::size_t>(std::floor(exact));
    used += count[i];
    remainder.emplace_back(-(exact - std::floor(exact)), i);
  }
  std::sort(remainder.begin(), remainder.end());
  for (std::size_t r = 0; used < n; r = (r + 1) % m, ++used) ++count[remainder[r].second];
  for (std::size_t i = 0; i < m; ++i) {
    if (count[i] > 0) continue;
    const auto donor = static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
    --count[donor];
    ++count[i];
  }
  std::vector<ClassIndex> y;
  y.reserve(n);
  for (std::size_t i = 0; i < m; ++i) y.insert(y.end(), count[i], static_cast<ClassIndex>(i));
  Rng rng(seed);
  rng.shuffle(y);
  return y;
}

/// Draws each given label independently from column latent[k] of `transition`.
inline std::vector<ClassIndex> flip_labels(std::span<const ClassIndex> latent, const ConditionalMatrix& transition,
                                           std::uint64_t seed) {
  const std::size_t m = transition.size();
  Rng rng(seed);
  std::vector<ClassIndex> given(latent.size());
  for (std::size_t k = 0; k < latent.size(); ++k) {
    const ClassIndex c = latent[k];
    if (c < 0 || static_cast<std::size_t>(c) >= m)
      detail::fail(ErrorKind::LabelOutOfRange, "latent label at index " + std::to_string(k) + " is out of range");
    const auto col = static_cast<std::size_t>(c);
    const double u = rng.uniform();
    double cum = 0.0;
    std::size_t pick = m;
    std::size_t last_nonzero = col;
    for (std::size_t r = 0; r < m; ++r) {
      const double p = transition(r, col);
      if (p > 0.0) last_nonzero = r;
      cum += p;
      if (u < cum && p > 0.0) {
        pick = r;
        break;
      }
    }
    given[k] = static_cast<ClassIndex>(pick == m ? last_nonzero : pick);
  }
  return given;
}

// ---------------------------------------------------------------------------
// Probabilities

enum class DiffractionMode { Ideal, PerClass, PerExample };

struct DiffractionSpec {
  DiffractionMode mode = DiffractionMode::Ideal;
  /// PerClass: p -> scale[j] * p + shift[j] on column j; scale must be > 0.
  std::vector<double> scale;
  std::vector<double> shift;
  /// PerExample: per-class mean error added to column j.
  std::vector<double> mean_error;
  /// PerExample: draw errors in antithetic pairs within each group of
  /// examples sharing (given, latent) labels, so each group's mean error is
  /// exactly mean_error[j]. When false every error is drawn independently.
  bool balanced = true;
  std::uint64_t seed = 0;
};

/// Support of the per-example error for one entry. `open_low` selects
/// (lo, hi] (entry at or above its threshold); otherwise [lo, hi).
struct ErrorRange {
  double lo;
  double hi;
  bool open_low;
};

/// The error range that keeps p* + error on the same side of the shifted
/// threshold t + mean_error as p* is of t. Endpoints are ordered min/max.
inline ErrorRange per_example_error_range(double p_star, double threshold, double mean_error) {
  if (p_star == threshold)
    detail::fail(ErrorKind::DegenerateRange, "ideal probability " + std::to_string(p_star) +
                                                 " equals its threshold; the error range is empty");
  const double a = mean_error + threshold - p_star;
  const double b = mean_error - threshold + p_star;
  return ErrorRange{std::min(a, b), std::max(a, b), p_star >= threshold};
}

/// One uniform draw from per_example_error_range, respecting its open end.
inline double sample_per_example_error(double p_star, double threshold, double mean_error, Rng& rng) {
  const ErrorRange r = per_example_error_range(p_star, threshold, mean_error);
  const double u = rng.uniform();
  return r.open_low ? r.hi - u * (r.hi - r.lo) : r.lo + u * (r.hi - r.lo);
}

/// Row k is column latent[k] of the transition matrix.
inline ProbMatrix ideal_probs(std::span<const ClassIndex> latent, const ConditionalMatrix& transition) {
  const std::size_t m = transition.size();
  std::vector<double> p(latent.size() * m);
  for (std::size_t k = 0; k < latent.size(); ++k) {
    const ClassIndex c = latent[k];
    if (c < 0 || static_cast<std::size_t>(c) >= m)
      detail::fail(ErrorKind::LabelOutOfRange, "latent label at index " + std::to_string(k) + " is out of range");
    for (std::size_t j = 0; j < m; ++j) p[k * m + j] = transition(j, static_cast<std::size_t>(c));
  }
  return ProbMatrix(latent.size(), m, std::move(p));
}

inline ProbMatrix per_class_diffract(const ProbMatrix& ideal, std::span<const double> scale, std::span<const double> shift) {
  const std::size_t m = ideal.cols();
  if (scale.size() != m || shift.size() != m)
    detail::fail(ErrorKind::DimensionMismatch, "per-class coefficients need one entry per class");
  for (double s : scale)
    if (!(s > 0.0)) detail::fail(ErrorKind::InvalidArgument, "per-class scale must be positive");
  std::vector<double> p(ideal.data());
  for (std::size_t k = 0; k < ideal.rows(); ++k)
    for (std::size_t j = 0; j < m; ++j) p[k * m + j] = scale[j] * p[k * m + j] + shift[j];
  return ProbMatrix(ideal.rows(), m, std::move(p), true);
}

/// Adds per-example error to every entry of an ideal matrix. Thresholds are
/// taken from the ideal matrix and the given labels.
inline ProbMatrix per_example_diffract(const ProbMatrix& ideal, std::span<const ClassIndex> given,
                                       std::span<const ClassIndex> latent, std::span<const double> mean_error,
                                       bool balanced, std::uint64_t seed) {
  const std::size_t n = ideal.rows();
  const std::size_t m = ideal.cols();
  if (given.size() != n || latent.size() != n)
    detail::fail(ErrorKind::DimensionMismatch, "label vectors must match the probability rows");
  if (mean_error.size() != m) detail::fail(ErrorKind::DimensionMismatch, "mean error needs one entry per class");
  const LabelVector noisy(std::vector<ClassIndex>(given.begin(), given.end()), m);
  const ThresholdVector t = compute_thresholds(ideal, noisy);

  Rng rng(seed);
  std::vector<double> p(ideal.data());
  if (!balanced) {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < m; ++j)
        p[k * m + j] += sample_per_example_error(ideal(k, j), t[j], mean_error[j], rng);
    return ProbMatrix(n, m, std::move(p), true);
  }

  std::map<std::pair<ClassIndex, ClassIndex>, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < n; ++k) groups[{given[k], latent[k]}].push_back(k);
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& [key, members] : groups) {
      const double p_star = ideal(members.front(), j);
      const ErrorRange r = per_example_error_range(p_star, t[j], mean_error[j]);
      const double half = 0.5 * (r.hi - r.lo);
      std::size_t s = 0;
      for (; s + 1 < members.size(); s += 2) {
        const double d = rng.uniform() * half;
        const double sign = rng.coin() ? 1.0 : -1.0;
        p[members[s] * m + j] += mean_error[j] + sign * d;
        p[members[s + 1] * m + j] += mean_error[j] - sign * d;
      }
      if (s < members.size()) p[members[s] * m + j] += mean_error[j];
    }
  }
  return ProbMatrix(n, m, std::move(p), true);
}

/// Synthetic predicted probabilities for examples with the given latent
/// labels. PerExample also needs the given (noisy) labels.
inline ProbMatrix gen_probs(std::span<const ClassIndex> latent, const ConditionalMatrix& transition,
                            const DiffractionSpec& d, std::span<const ClassIndex> given = {}) {
  ProbMatrix ideal = ideal_probs(latent, transition);
  switch (d.mode) {
    case DiffractionMode::Ideal:
      return ideal;
    case DiffractionMode::PerClass:
      return per_class_diffract(ideal, d.scale, d.shift);
    case DiffractionMode::PerExample:
      if (given.empty()) detail::fail(ErrorKind::InvalidArgument, "per-example diffraction needs the given labels");
      return per_example_diffract(ideal, given, latent, d.mean_error, d.balanced, d.seed);
  }
  detail::fail(ErrorKind::Internal, "unknown diffraction mode");
}

// ---------------------------------------------------------------------------
// Learnability bounds

struct NBound {
  std::optional<double> threshold;  ///< E1*E2/C + E1 + E2; empty when C = 0
  bool pass = false;
};

/// Number-of-examples bound for one class: n > E1*E2/C + E1 + E2.
inline NBound n_bound(double correct, double type1, double type2, double n) {
  if (!(correct > 0.0)) return {};
  const double threshold = type1 * type2 / correct + type1 + type2;
  return {threshold, n > threshold};
}

struct ClassLearnability {
  bool class_conditional = false;  ///< p(given=k) < p(given=k|latent=k) and p(latent=k) < p(latent=k|given=k)
  bool class_product = false;      ///< p(given=k) p(latent=k) < p(given=k, latent=k)
  NBound n_bound;
  /// Companion form D(k) > E1*E2/C of the n bound.
  bool d_bound = false;
};

struct LearnabilityReport {
  double trace_noise_transition = 0.0;
  double trace_mixing = 0.0;
  bool trace_bound = false;
  /// Count scale used for the n bound (1 means fractions of the data set).
  double n = 1.0;
  std::vector<ClassLearnability> classes;

  bool class_conditional_bound() const {
    return std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.class_conditional; });
  }
  bool class_product_bound() const {
    return std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.class_product; });
  }
  bool n_bound_all() const {
    return std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.n_bound.pass; });
  }
  bool all_pass() const { return trace_bound && class_conditional_bound() && class_product_bound() && n_bound_all(); }
};

/// Evaluates the four necessary learnability conditions on a joint. `n`
/// scales the joint to counts for the n bound; the bound is homogeneous in n
/// so the default of 1 evaluates it on fractions. Never throws.
inline LearnabilityReport check_learnability(const JointMatrix& q, double n = 1.0) {
  const std::size_t m = q.size();
  LearnabilityReport r;
  r.n = n;
  std::vector<double> given(m), latent(m);
  for (std::size_t k = 0; k < m; ++k) {
    given[k] = q.row_total(k);
    latent[k] = q.col_total(k);
  }
  bool defined = true;
  for (std::size_t k = 0; k < m; ++k) {
    if (latent[k] > 0.0)
      r.trace_noise_transition += q(k, k) / latent[k];
    else
      defined = false;
    if (given[k] > 0.0)
      r.trace_mixing += q(k, k) / given[k];
    else
      defined = false;
  }
  r.trace_bound = defined && r.trace_noise_transition > 1.0 && r.trace_mixing > 1.0;

  for (std::size_t k = 0; k < m; ++k) {
    ClassLearnability c;
    const double joint = q(k, k);
    if (latent[k] > 0.0 && given[k] > 0.0)
      c.class_conditional = given[k] < joint / latent[k] && latent[k] < joint / given[k];
    c.class_product = given[k] * latent[k] < joint;
    const double correct = joint * n;
    const double type1 = (given[k] - joint) * n;
    const double type2 = (latent[k] - joint) * n;
    c.n_bound = n_bound(correct, type1, type2, n);
    if (correct > 0.0) c.d_bound = n - correct - type1 - type2 > type1 * type2 / correct;
    r.classes.push_back(c);
  }
  return r;
}

inline LearnabilityReport check_learnability(const ConditionalMatrix& transition, const PriorVector& latent_prior,
                                             double n = 1.0) {
  return check_learnability(joint_from_transition(transition, latent_prior), n);
}

}  // namespace cleanjoint
