// tests/noise_lab_test.cpp

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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "cleanjoint/eval.hpp"
#include "cleanjoint/noise_lab.hpp"
#include "helpers.hpp"

using namespace cleanjoint;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

NoiseSpec spec(std::size_t m, double trace, double sparsity, std::uint64_t seed, bool dominance = true) {
  NoiseSpec s;
  s.m = m;
  s.trace = trace;
  s.sparsity = sparsity;
  s.seed = seed;
  s.dominance = dominance;
  return s;
}

std::size_t zero_offdiagonals(const ConditionalMatrix& t) {
  std::size_t z = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if (i != j && t(i, j) == 0.0) ++z;
  return z;
}

}  // namespace

TEST(GenNoiseMatrix, FullTraceIsIdentity) {
  const auto t = gen_noise_matrix(spec(4, 4.0, 0.0, 1));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(t(i, j), i == j ? 1.0 : 0.0);
}

TEST(GenNoiseMatrix, TraceSparsityAndDominance) {
  const auto t = gen_noise_matrix(spec(3, 2.4, 0.5, 7));
  EXPECT_EQ(zero_offdiagonals(t), 3u);
  EXPECT_NEAR(t.trace(), 2.4, 1e-6);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(t(0, c) + t(1, c) + t(2, c), 1.0, 1e-9);
  EXPECT_TRUE(diagonal_dominates(t));
}

TEST(GenNoiseMatrix, GridProperties) {
  for (std::size_t m : {3u, 5u, 10u}) {
    for (double noise : {0.1, 0.3, 0.5}) {
      for (double sp : {0.0, 0.2, 0.4}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
          const double trace = static_cast<double>(m) * (1.0 - noise);
          if (trace <= 1.0) continue;
          const auto t = gen_noise_matrix(spec(m, trace, sp, seed));
          EXPECT_NEAR(t.trace(), trace, 1e-6);
          EXPECT_EQ(zero_offdiagonals(t), static_cast<std::size_t>(std::floor(sp * m * (m - 1) + 0.5)));
          EXPECT_TRUE(diagonal_dominates(t));
          EXPECT_TRUE(check_learnability(t, PriorVector::uniform(m)).trace_bound);
        }
      }
    }
  }
}

TEST(GenNoiseMatrix, RejectsUnlearnableTraces) {
  EXPECT_EQ(kind_of([] { gen_noise_matrix(spec(3, 1.0, 0.0, 0)); }), ErrorKind::InfeasibleSpec);
  EXPECT_EQ(kind_of([] { gen_noise_matrix(spec(3, 0.7, 0.0, 0)); }), ErrorKind::InfeasibleSpec);
  EXPECT_EQ(kind_of([] { gen_noise_matrix(spec(3, 3.5, 0.0, 0)); }), ErrorKind::InfeasibleSpec);
  // Three classes cannot lose four of six off-diagonal slots and still move mass out of every column.
  EXPECT_EQ(kind_of([] { gen_noise_matrix(spec(3, 2.0, 0.7, 0)); }), ErrorKind::InfeasibleSpec);
}

TEST(GenNoiseMatrix, NoDominanceStillHitsTrace) {
  const auto t = gen_noise_matrix(spec(4, 1.2, 0.0, 3, false));
  EXPECT_NEAR(t.trace(), 1.2, 1e-6);
}

TEST(GenNoiseMatrix, Deterministic) {
  EXPECT_EQ(gen_noise_matrix(spec(5, 3.5, 0.4, 9)).data(), gen_noise_matrix(spec(5, 3.5, 0.4, 9)).data());
  EXPECT_NE(gen_noise_matrix(spec(5, 3.5, 0.4, 9)).data(), gen_noise_matrix(spec(5, 3.5, 0.4, 10)).data());
}

TEST(SampleLatentLabels, MatchesPriorAndCoversClasses) {
  const auto y = sample_latent_labels(1000, PriorVector({0.09, 0.12, 0.79}), 4);
  std::vector<int> c(3, 0);
  for (auto v : y) ++c[v];
  EXPECT_EQ(c, (std::vector<int>{90, 120, 790}));
  const auto tiny = sample_latent_labels(3, PriorVector({0.98, 0.01, 0.01}), 4);
  std::vector<int> d(3, 0);
  for (auto v : tiny) ++d[v];
  EXPECT_EQ(d, (std::vector<int>{1, 1, 1}));
}

TEST(FlipLabels, IdentityKeepsLabels) {
  const ConditionalMatrix eye(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, Conditioning::NoiseTransition);
  const std::vector<ClassIndex> y{0, 1, 2, 2, 1, 0};
  EXPECT_EQ(flip_labels(y, eye, 5), y);
}

TEST(FlipLabels, FrequencyWithinThreeSigma) {
  const ConditionalMatrix t(2, {0.6, 0.5, 0.4, 0.5}, Conditioning::NoiseTransition);
  const std::vector<ClassIndex> y(10000, 0);
  const auto g = flip_labels(y, t, 12);
  const auto flips = static_cast<double>(std::count(g.begin(), g.end(), 1));
  const double sigma = std::sqrt(10000 * 0.4 * 0.6);
  EXPECT_LE(std::abs(flips - 4000.0), 3 * sigma);
  EXPECT_EQ(flip_labels(y, t, 12), g);
}

TEST(ErrorRange, BranchesAndOrientation) {
  for (auto [p, t, e] : {std::tuple{0.9, 0.8, 0.0}, {0.2, 0.6, 0.0}, {0.9, 0.8, 0.05}, {0.3, 0.35, -0.1}}) {
    const auto r = per_example_error_range(p, t, e);
    const auto [lo, hi, open_low] = oracle::error_support(p, t, e);
    EXPECT_NEAR(r.lo, std::min(lo, hi), 1e-15);
    EXPECT_NEAR(r.hi, std::max(lo, hi), 1e-15);
    EXPECT_EQ(r.open_low, open_low);
  }
  const auto dog = per_example_error_range(0.9, 0.8, 0.0);
  EXPECT_NEAR(dog.lo, -0.1, 1e-15);
  EXPECT_NEAR(dog.hi, 0.1, 1e-15);
  EXPECT_EQ(kind_of([] { per_example_error_range(0.5, 0.5, 0.0); }), ErrorKind::DegenerateRange);
}

TEST(ErrorRange, SamplesKeepTheirSide) {
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double p = rng.uniform(), t = rng.uniform(), e = rng.uniform(-0.1, 0.1);
    if (p == t) continue;
    const double x = sample_per_example_error(p, t, e, rng);
    const auto r = per_example_error_range(p, t, e);
    EXPECT_GE(x, r.lo);
    EXPECT_LE(x, r.hi);
    EXPECT_EQ(p >= t, p + x >= t + e);
  }
}

TEST(GenProbs, IdealRowsAreTransitionColumns) {
  const ConditionalMatrix eye(2, {1, 0, 0, 1}, Conditioning::NoiseTransition);
  const std::vector<ClassIndex> y{0, 1, 1};
  const auto p = gen_probs(y, eye, DiffractionSpec{});
  EXPECT_EQ(p.data(), (std::vector<double>{1, 0, 0, 1, 0, 1}));

  const ConditionalMatrix t(2, {0.8, 0.3, 0.2, 0.7}, Conditioning::NoiseTransition);
  const auto q = gen_probs(y, t, DiffractionSpec{});
  EXPECT_EQ(q(1, 0), 0.3);
  EXPECT_EQ(q(1, 1), 0.7);
}

TEST(GenProbs, PerClassMapsColumns) {
  const ConditionalMatrix t(2, {0.8, 0.3, 0.2, 0.7}, Conditioning::NoiseTransition);
  DiffractionSpec d;
  d.mode = DiffractionMode::PerClass;
  d.scale = {2.0, 0.5};
  d.shift = {-0.3, 0.4};
  const std::vector<ClassIndex> y{0, 1};
  const auto p = gen_probs(y, t, d);
  EXPECT_NEAR(p(0, 0), 1.3, 1e-15);
  EXPECT_NEAR(p(1, 1), 0.75, 1e-15);
  d.scale = {0.0, 1.0};
  EXPECT_EQ(kind_of([&] { gen_probs(y, t, d); }), ErrorKind::InvalidArgument);
}

TEST(GenProbs, IdealThresholdsMatchClosedForm) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NoiseSpec s = spec(5, 3.5, 0.2, seed);
    const auto inst = synthesize(s, 2000);
    const LabelVector labels(inst.given, 5);
    const auto t = compute_thresholds(ideal_probs(inst.latent, inst.transition), labels);
    const auto joint = oracle::empirical_joint(testing_util::to_ints(inst.given), testing_util::to_ints(inst.latent), 5);
    const auto tr = testing_util::to_rows(inst.transition.dense());
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(t[i], oracle::ideal_threshold(tr, joint, i), 1e-9);
  }
}

TEST(GenProbs, PerExampleKeepsGroupMeansAndSides) {
  NoiseSpec s = spec(4, 3.0, 0.0, 21);
  const auto inst = synthesize(s, 1500);
  const ProbMatrix ideal = ideal_probs(inst.latent, inst.transition);
  const LabelVector labels(inst.given, 4);
  const auto t = compute_thresholds(ideal, labels);
  const std::vector<double> eps{0.05, -0.02, 0.0, 0.08};
  DiffractionSpec d;
  d.mode = DiffractionMode::PerExample;
  d.mean_error = eps;
  d.seed = 3;
  const auto p = gen_probs(inst.latent, inst.transition, d, inst.given);
  const auto t2 = compute_thresholds(p, labels);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(t2[j], t[j] + eps[j], 1e-12);
    for (std::size_t k = 0; k < p.rows(); ++k) EXPECT_EQ(ideal(k, j) >= t[j], p(k, j) >= t[j] + eps[j]);
  }
  EXPECT_EQ(gen_probs(inst.latent, inst.transition, d, inst.given).data(), p.data());
  d.balanced = false;
  const auto q = gen_probs(inst.latent, inst.transition, d, inst.given);
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(ideal(k, j) >= t[j], q(k, j) >= t[j] + eps[j]);
}

TEST(GenProbs, FoxAndDog) {
  // Given label fox (0), latent dog (1).
  const ThresholdVector t({0.6, 0.8});
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double fox = 0.2 + sample_per_example_error(0.2, 0.6, 0.0, rng);
    const double dog = 0.9 + sample_per_example_error(0.9, 0.8, 0.0, rng);
    const std::vector<double> row{fox, dog};
    EXPECT_EQ(confident_latent(row, t), 1);
  }
}

TEST(Learnability, IdentityPassesEverything) {
  const auto r = check_learnability(JointMatrix(3, {1.0 / 3, 0, 0, 0, 1.0 / 3, 0, 0, 0, 1.0 / 3}));
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(r.trace_bound);
  EXPECT_TRUE(r.class_conditional_bound());
  EXPECT_TRUE(r.class_product_bound());
  EXPECT_TRUE(r.n_bound_all());
}

TEST(Learnability, TraceOfOneFails) {
  // Columns all equal: given label carries no information.
  const ConditionalMatrix t(2, {0.5, 0.5, 0.5, 0.5}, Conditioning::NoiseTransition);
  EXPECT_NEAR(t.trace(), 1.0, 1e-15);
  const auto r = check_learnability(t, PriorVector::uniform(2));
  EXPECT_FALSE(r.trace_bound);
  EXPECT_FALSE(r.all_pass());
}

TEST(Learnability, NBoundArithmetic) {
  const auto b = n_bound(10, 5, 5, 22);
  ASSERT_TRUE(b.threshold);
  EXPECT_DOUBLE_EQ(*b.threshold, 12.5);
  EXPECT_TRUE(b.pass);
  EXPECT_FALSE(n_bound(10, 5, 5, 12.5).pass);
  EXPECT_FALSE(n_bound(0, 5, 5, 100).threshold);
  EXPECT_FALSE(n_bound(0, 5, 5, 100).pass);
}

TEST(Learnability, HomogeneousInN) {
  const JointMatrix q(2, {0.4, 0.1, 0.05, 0.45});
  const auto a = check_learnability(q);
  const auto b = check_learnability(q, 1000.0);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(a.classes[k].n_bound.pass, b.classes[k].n_bound.pass);
    EXPECT_NEAR(*b.classes[k].n_bound.threshold, 1000.0 * *a.classes[k].n_bound.threshold, 1e-9);
  }
}
