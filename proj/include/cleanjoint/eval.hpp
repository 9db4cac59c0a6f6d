// cleanjoint/eval.hpp

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

// Scoring against synthetic ground truth, and the exactness suite that runs
// the confident joint over a grid of generated noise.
//
// Ground truth for a generated sample is its realized joint: the frequency of
// (given, latent) pairs actually drawn, not the population joint the draws came
// from.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cleanjoint/confident_joint.hpp"
#include "cleanjoint/error.hpp"
#include "cleanjoint/joint_estimation.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/noise_lab.hpp"
#include "cleanjoint/numeric.hpp"
#include "cleanjoint/rank_prune.hpp"
#include "cleanjoint/rng.hpp"

namespace cleanjoint {

// ---------------------------------------------------------------------------
// Metrics

/// Flag-vs-truth binary classification scores. Accuracy is over all n
/// examples. Precision (recall) is 0 when nothing is flagged (nothing is
/// truly flipped).
struct ErrorMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline ErrorMetrics score_errors(std::span<const std::size_t> flagged, std::span<const std::size_t> true_flips,
                                 std::size_t n) {
  if (n == 0) detail::fail(ErrorKind::InvalidArgument, "cannot score an empty data set");
  std::vector<char> f(n, 0), t(n, 0);
  for (std::size_t k : flagged) {
    if (k >= n) detail::fail(ErrorKind::InvalidArgument, "flagged index " + std::to_string(k) + " is out of range");
    f[k] = 1;
  }
  for (std::size_t k : true_flips) {
    if (k >= n) detail::fail(ErrorKind::InvalidArgument, "true flip index " + std::to_string(k) + " is out of range");
    t[k] = 1;
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (f[k] && t[k]) ++tp;
    else if (f[k]) ++fp;
    else if (t[k]) ++fn;
    else ++tn;
  }
  ErrorMetrics r;
  r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(n);
  r.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

/// Indices whose given label differs from the latent label.
inline std::vector<std::size_t> true_flips(std::span<const ClassIndex> given, std::span<const ClassIndex> latent) {
  if (given.size() != latent.size()) detail::fail(ErrorKind::DimensionMismatch, "label sequences differ in length");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < given.size(); ++k)
    if (given[k] != latent[k]) out.push_back(k);
  return out;
}

struct JointError {
  double rmse = 0.0;
  double max_abs = 0.0;
};

inline JointError score_joint(const Dense<double>& estimate, const Dense<double>& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    detail::fail(ErrorKind::ShapeMismatch, "estimate is " + std::to_string(estimate.rows()) + "x" +
                                               std::to_string(estimate.cols()) + ", truth is " +
                                               std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()));
  CompensatedSum sq;
  double worst = 0.0;
  for (std::size_t x = 0; x < truth.data().size(); ++x) {
    const double d = estimate.data()[x] - truth.data()[x];
    sq.add(d * d);
    worst = std::max(worst, std::abs(d));
  }
  return {std::sqrt(sq.value() / static_cast<double>(truth.data().size())), worst};
}

inline JointError score_joint(const JointMatrix& estimate, const JointMatrix& truth) {
  return score_joint(estimate.dense(), truth.dense());
}

// ---------------------------------------------------------------------------
// Synthetic instances

struct SyntheticInstance {
  ConditionalMatrix transition;
  std::vector<ClassIndex> latent;
  std::vector<ClassIndex> given;
};

/// Noise matrix, latent labels and flipped labels from one seed. Each piece
/// draws from its own derived stream.
inline SyntheticInstance synthesize(const NoiseSpec& spec, std::size_t n) {
  NoiseSpec s = spec;
  s.seed = derive_seed(spec.seed, {1});
  ConditionalMatrix t = gen_noise_matrix(s);
  auto latent = sample_latent_labels(n, latent_prior(spec), derive_seed(spec.seed, {2}));
  auto given = flip_labels(latent, t, derive_seed(spec.seed, {3}));
  return {std::move(t), std::move(latent), std::move(given)};
}

// ---------------------------------------------------------------------------
// Parallel map

/// Worker count: CLEANJOINT_THREADS when set to a positive integer, else the
/// hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("CLEANJOINT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs f(i) for i in [0, count) on up to `threads` workers. Results land in
/// slot i, so the output order never depends on scheduling.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, std::size_t threads, F f) {
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      if (failed) return;
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Exactness suite

enum class CaseOutcome { Pass, Fail, HypothesesNotMet };

inline std::string_view to_string(CaseOutcome o) {
  switch (o) {
    case CaseOutcome::Pass: return "pass";
    case CaseOutcome::Fail: return "fail";
    case CaseOutcome::HypothesesNotMet: return "hypotheses-not-met";
  }
  return "unknown";
}

/// Checks run per grid cell:
///  ideal       ideal probabilities: CJ flags equal the true flips and the
///              calibrated joint is within 1/n + 1e-9 of the realized joint
///  thresholds  ideal thresholds equal sum_j p(given=i|latent=j) p(latent=j|given=i)
///  per-class   per-class affine maps leave every CJ bin assignment unchanged
///  inflation   adding 1 to one class column changes the argmax flags but not
///              the CJ flags
///  per-example per-example errors around per-class means leave the CJ flags
///              equal to the true flips, and no entry crosses its threshold
struct SuiteCase {
  std::string check;
  std::size_t m = 0;
  double noise = 0.0;
  double sparsity = 0.0;
  std::uint64_t seed = 0;
  CaseOutcome outcome = CaseOutcome::Pass;
  std::string detail;
};

struct SuiteConfig {
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::size_t n = 3000;
  std::vector<std::size_t> class_counts{3, 5, 10};
  /// Noise level r gives trace m * (1 - r).
  std::vector<double> noise{0.2, 0.4, 0.7};
  std::vector<double> sparsity{0.0, 0.2, 0.4, 0.6};
  bool dominance = true;
  std::size_t threads = 0;  ///< 0 means worker_count()
};

struct SuiteReport {
  std::vector<SuiteCase> cases;

  std::size_t count(CaseOutcome o) const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [o](const auto& c) { return c.outcome == o; }));
  }
  std::size_t count(std::string_view check, CaseOutcome o) const {
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [&](const auto& c) { return c.check == check && c.outcome == o; }));
  }
  bool all_pass() const { return count(CaseOutcome::Fail) == 0; }
};

namespace detail {

inline std::vector<std::size_t> sorted_flags(const ErrorReport& r) {
  auto f = r.flagged;
  std::sort(f.begin(), f.end());
  return f;
}

/// Closed form of an ideal threshold from the realized joint.
inline double ideal_threshold(const ConditionalMatrix& t, const JointMatrix& realized, std::size_t i) {
  const std::size_t m = t.size();
  const double given_i = realized.row_total(i);
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += t(i, j) * realized(i, j) / given_i;
  return s;
}

inline std::vector<SuiteCase> run_suite_cell(const SuiteConfig& cfg, std::size_t m, double noise, double sparsity,
                                             std::uint64_t seed) {
  static const char* kChecks[] = {"ideal", "thresholds", "per-class", "inflation", "per-example"};
  std::vector<SuiteCase> out;
  for (const char* c : kChecks) out.push_back({c, m, noise, sparsity, seed, CaseOutcome::Pass, ""});
  auto all = [&](CaseOutcome o, const std::string& why) {
    for (auto& c : out) {
      c.outcome = o;
      c.detail = why;
    }
    return out;
  };

  NoiseSpec spec;
  spec.m = m;
  spec.trace = static_cast<double>(m) * (1.0 - noise);
  spec.sparsity = sparsity;
  spec.dominance = cfg.dominance;
  spec.seed = derive_seed(seed, {m, std::bit_cast<std::uint64_t>(noise), std::bit_cast<std::uint64_t>(sparsity)});

  std::optional<SyntheticInstance> inst;
  try {
    inst.emplace(synthesize(spec, cfg.n));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InfeasibleSpec) return all(CaseOutcome::HypothesesNotMet, e.what());
    throw;
  }
  if (!diagonal_dominates(inst->transition))
    return all(CaseOutcome::HypothesesNotMet, "noise matrix diagonal does not dominate its rows and columns");
  std::vector<std::size_t> given_sizes(m, 0);
  for (ClassIndex g : inst->given) ++given_sizes[static_cast<std::size_t>(g)];
  if (std::count(given_sizes.begin(), given_sizes.end(), 0u) > 0)
    return all(CaseOutcome::HypothesesNotMet, "a class received no given labels");

  const LabelVector labels(inst->given, m);
  const ProbMatrix ideal = ideal_probs(inst->latent, inst->transition);
  const auto truth = true_flips(inst->given, inst->latent);
  const JointMatrix realized = empirical_joint(inst->given, inst->latent, m);
  const ConfidentJointResult cj = confident_joint(ideal, labels);
  const auto cj_flags = sorted_flags(errors_cj(ideal, labels, cj));

  // ideal
  {
    auto& c = out[0];
    const JointMatrix q = calibrate(cj.counts, labels);
    const double err = score_joint(q, realized).max_abs;
    const double bound = 1.0 / static_cast<double>(cfg.n) + 1e-9;
    if (cj_flags != truth) {
      c.outcome = CaseOutcome::Fail;
      c.detail = "flagged " + std::to_string(cj_flags.size()) + " examples, " + std::to_string(truth.size()) +
                 " were flipped";
    } else if (err > bound) {
      c.outcome = CaseOutcome::Fail;
      c.detail = "joint error " + std::to_string(err) + " exceeds " + std::to_string(bound);
    }
  }
  // thresholds
  {
    auto& c = out[1];
    const ThresholdVector t = compute_thresholds(ideal, labels);
    for (std::size_t i = 0; i < m; ++i) {
      const double want = ideal_threshold(inst->transition, realized, i);
      if (std::abs(t[i] - want) > 1e-9) {
        c.outcome = CaseOutcome::Fail;
        c.detail = "class " + std::to_string(i) + " threshold differs from closed form by " +
                   std::to_string(std::abs(t[i] - want));
        break;
      }
    }
  }

  Rng rng(derive_seed(spec.seed, {4}));
  // per-class and inflation
  if (cj.collisions > 0) {
    out[2].outcome = out[3].outcome = CaseOutcome::HypothesesNotMet;
    out[2].detail = out[3].detail = std::to_string(cj.collisions) + " ideal rows pass more than one threshold";
  } else {
    static constexpr double kScale[] = {0.5, 2.0, 10.0};
    static constexpr double kShift[] = {-0.3, 0.0, 0.4};
    std::vector<double> scale(m), shift(m);
    for (std::size_t j = 0; j < m; ++j) {
      scale[j] = kScale[rng.below(3)];
      shift[j] = kShift[rng.below(3)];
    }
    const ProbMatrix mapped = per_class_diffract(ideal, scale, shift);
    if (confident_joint(mapped, labels).assignment != cj.assignment) {
      out[2].outcome = CaseOutcome::Fail;
      out[2].detail = "a bin assignment changed under the per-class map";
    }

    const std::size_t inflated = rng.below(m);
    std::vector<double> one(m, 1.0), lift(m, 0.0);
    lift[inflated] = 1.0;
    const ProbMatrix skewed = per_class_diffract(ideal, one, lift);
    const bool cj_same = sorted_flags(errors_cj(skewed, labels)) == cj_flags;
    const bool confusion_changed =
        sorted_flags(errors_confusion(skewed, labels)) != sorted_flags(errors_confusion(ideal, labels));
    if (!cj_same || !confusion_changed) {
      out[3].outcome = CaseOutcome::Fail;
      out[3].detail = !cj_same ? "confident-joint flags changed" : "argmax flags did not change";
    } else {
      out[3].detail = "class " + std::to_string(inflated) + " inflated";
    }
  }

  // per-example
  {
    auto& c = out[4];
    std::vector<double> mean_error(m);
    for (auto& e : mean_error) e = rng.uniform(-0.1, 0.1);
    const ThresholdVector t = compute_thresholds(ideal, labels);
    bool degenerate = false;
    for (std::size_t k = 0; k < cfg.n && !degenerate; ++k)
      for (std::size_t j = 0; j < m; ++j)
        if (ideal(k, j) == t[j]) degenerate = true;
    if (cj.collisions > 0) {
      c.outcome = CaseOutcome::HypothesesNotMet;
      c.detail = std::to_string(cj.collisions) + " ideal rows pass more than one threshold";
    } else if (degenerate) {
      c.outcome = CaseOutcome::HypothesesNotMet;
      c.detail = "an ideal probability equals its threshold, so its error range is empty";
    } else {
      const ProbMatrix noisy =
          per_example_diffract(ideal, inst->given, inst->latent, mean_error, true, derive_seed(spec.seed, {5}));
      std::size_t crossed = 0;
      for (std::size_t k = 0; k < cfg.n; ++k)
        for (std::size_t j = 0; j < m; ++j)
          if ((ideal(k, j) >= t[j]) != (noisy(k, j) >= t[j] + mean_error[j])) ++crossed;
      const auto flags = sorted_flags(errors_cj(noisy, labels));
      if (crossed > 0) {
        c.outcome = CaseOutcome::Fail;
        c.detail = std::to_string(crossed) + " entries crossed their threshold";
      } else if (flags != truth) {
        c.outcome = CaseOutcome::Fail;
        c.detail = "flagged " + std::to_string(flags.size()) + " examples, " + std::to_string(truth.size()) +
                   " were flipped";
      }
    }
  }
  return out;
}

}  // namespace detail

/// Runs every check on every (class count, noise, sparsity, seed) cell. Cells
/// run in parallel; the report lists them in grid order.
inline SuiteReport run_theorem_suite(const SuiteConfig& cfg) {
  struct Cell {
    std::size_t m;
    double noise, sparsity;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t m : cfg.class_counts)
    for (double r : cfg.noise)
      for (double s : cfg.sparsity)
        for (std::uint64_t seed : cfg.seeds) cells.push_back({m, r, s, seed});
  const std::size_t threads = cfg.threads ? cfg.threads : worker_count();
  auto per_cell = parallel_map<std::vector<SuiteCase>>(cells.size(), threads, [&](std::size_t i) {
    const Cell& c = cells[i];
    return detail::run_suite_cell(cfg, c.m, c.noise, c.sparsity, c.seed);
  });
  SuiteReport report;
  for (auto& v : per_cell) report.cases.insert(report.cases.end(), v.begin(), v.end());
  return report;
}

// ---------------------------------------------------------------------------
// Joint estimation accuracy under per-class diffraction

struct RmseConfig {
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::size_t n = 5000;
  std::size_t m = 10;
  std::vector<double> noise{0.2, 0.4};
  std::vector<double> sparsity{0.0, 0.2, 0.4, 0.6};
  /// Per-class scale is drawn from [scale_lo, scale_hi], shift from
  /// [-shift_max, shift_max].
  double scale_lo = 0.5;
  double scale_hi = 2.0;
  double shift_max = 0.2;
  std::size_t threads = 0;
};

struct RmseRow {
  double noise = 0.0;
  double sparsity = 0.0;
  std::uint64_t seed = 0;
  JointError confident;  ///< joint calibrated from the confident joint
  JointError confusion;  ///< joint calibrated from argmax counts
};

struct RmseReport {
  std::vector<RmseRow> rows;

  double mean_rmse_confident() const {
    double s = 0.0;
    for (const auto& r : rows) s += r.confident.rmse;
    return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
  }
  double mean_rmse_confusion() const {
    double s = 0.0;
    for (const auto& r : rows) s += r.confusion.rmse;
    return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
  }
  double max_rmse_confident() const {
    double s = 0.0;
    for (const auto& r : rows) s = std::max(s, r.confident.rmse);
    return s;
  }
};

inline RmseReport rmse_study(const RmseConfig& cfg) {
  struct Cell {
    double noise, sparsity;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double r : cfg.noise)
    for (double s : cfg.sparsity)
      for (std::uint64_t seed : cfg.seeds) cells.push_back({r, s, seed});
  const std::size_t threads = cfg.threads ? cfg.threads : worker_count();
  auto rows = parallel_map<RmseRow>(cells.size(), threads, [&](std::size_t i) {
    const Cell& c = cells[i];
    NoiseSpec spec;
    spec.m = cfg.m;
    spec.trace = static_cast<double>(cfg.m) * (1.0 - c.noise);
    spec.sparsity = c.sparsity;
    spec.seed = derive_seed(c.seed, {cfg.m, std::bit_cast<std::uint64_t>(c.noise), std::bit_cast<std::uint64_t>(c.sparsity)});
    const SyntheticInstance inst = synthesize(spec, cfg.n);
    const LabelVector labels(inst.given, cfg.m);
    Rng rng(derive_seed(spec.seed, {6}));
    std::vector<double> scale(cfg.m), shift(cfg.m);
    for (std::size_t j = 0; j < cfg.m; ++j) {
      scale[j] = rng.uniform(cfg.scale_lo, cfg.scale_hi);
      shift[j] = rng.uniform(-cfg.shift_max, cfg.shift_max);
    }
    const ProbMatrix probs = per_class_diffract(ideal_probs(inst.latent, inst.transition), scale, shift);
    const JointMatrix truth = empirical_joint(inst.given, inst.latent, cfg.m);
    const JointMatrix q_cj = calibrate(confident_joint(probs, labels).counts, labels);
    const JointMatrix q_cm = calibrate(confusion_joint(probs, labels), labels);
    return RmseRow{c.noise, c.sparsity, c.seed, score_joint(q_cj, truth), score_joint(q_cm, truth)};
  });
  return RmseReport{std::move(rows)};
}

}  // namespace cleanjoint
