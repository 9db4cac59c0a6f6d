// tests/joint_estimation_test.cpp

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

#include <random>
#include <vector>

#include "cleanjoint/joint_estimation.hpp"
#include "helpers.hpp"

using namespace cleanjoint;

namespace {

void expect_joint(const JointMatrix& q, const std::vector<double>& want) {
  ASSERT_EQ(q.data().size(), want.size());
  for (std::size_t x = 0; x < want.size(); ++x) EXPECT_NEAR(q.data()[x], want[x], 1e-15) << "entry " << x;
}

std::vector<std::size_t> sizes(std::initializer_list<std::size_t> s) { return s; }

}  // namespace

TEST(Calibrate, HandExamples) {
  expect_joint(calibrate(CountMatrix(2, {2, 0, 0, 2}, CountRole::ConfidentJoint), sizes({2, 2})), {0.5, 0, 0, 0.5});
  expect_joint(calibrate(CountMatrix(2, {1, 0, 0, 1}, CountRole::ConfidentJoint), sizes({2, 2})), {0.5, 0, 0, 0.5});
  expect_joint(calibrate(CountMatrix(2, {3, 1, 0, 4}, CountRole::ConfidentJoint), sizes({4, 4})),
               {0.375, 0.125, 0, 0.5});
}

TEST(Calibrate, ZeroRowFallsBackToDiagonal) {
  std::vector<std::string> warnings;
  const auto q = calibrate(CountMatrix(2, {0, 0, 1, 1}, CountRole::ConfidentJoint), sizes({2, 2}), {}, &warnings);
  expect_joint(q, {0.5, 0, 0.25, 0.25});
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("ZeroRow"), std::string::npos);

  CalibrateOptions strict;
  strict.zero_row_fallback = false;
  try {
    calibrate(CountMatrix(2, {0, 0, 1, 1}, CountRole::ConfidentJoint), sizes({2, 2}), strict);
    FAIL() << "expected ZeroRow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroRow);
  }
}

TEST(Calibrate, RejectsInconsistentCounts) {
  EXPECT_THROW(calibrate(CountMatrix(2, {3, 0, 0, 1}, CountRole::ConfidentJoint), sizes({2, 2})), Error);
  EXPECT_THROW(calibrate(CountMatrix(2, {1, 0, 0, 1}, CountRole::ConfidentJoint), sizes({2})), Error);
  EXPECT_THROW(calibrate(CountMatrix(2, {0, 0, 0, 1}, CountRole::ConfidentJoint), sizes({0, 2})), Error);
}

TEST(Calibrate, FullyCountedRowsAreRecovered) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + gen() % 6;
    std::vector<std::uint64_t> c(m * m);
    std::vector<std::size_t> s(m, 0);
    std::size_t n = 0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        c[i * m + j] = gen() % 20 + (i == j);
        s[i] += c[i * m + j];
      }
      n += s[i];
    }
    const auto q = calibrate(CountMatrix(m, c, CountRole::ConfidentJoint), s);
    for (std::size_t x = 0; x < c.size(); ++x) EXPECT_NEAR(q.data()[x] * static_cast<double>(n), c[x], 1e-9);
  }
}

TEST(Calibrate, MatchesOracle) {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + gen() % 7;
    std::vector<std::vector<std::uint64_t>> c(m, std::vector<std::uint64_t>(m));
    std::vector<std::uint64_t> flat;
    std::vector<std::size_t> s(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t row = 0;
      for (auto& v : c[i]) row += (v = gen() % 3 == 0 ? 0 : gen() % 50);
      s[i] = row + gen() % 30 + 1;
      flat.insert(flat.end(), c[i].begin(), c[i].end());
    }
    const auto q = calibrate(CountMatrix(m, flat, CountRole::ConfidentJoint), s);
    const auto want = oracle::calibrate(c, s);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(q(i, j), want[i][j], 1e-12);
  }
}

TEST(LatentEstimates, HandExamples) {
  const auto diag = latent_estimates(JointMatrix(2, {0.5, 0, 0, 0.5}));
  EXPECT_EQ(diag.latent_prior.values(), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(diag.noise_transition.data(), (std::vector<double>{1, 0, 0, 1}));
  EXPECT_EQ(diag.mixing.data(), (std::vector<double>{1, 0, 0, 1}));

  const auto l = latent_estimates(JointMatrix(2, {0.375, 0.125, 0, 0.5}));
  EXPECT_NEAR(l.latent_prior[0], 0.375, 1e-15);
  EXPECT_NEAR(l.latent_prior[1], 0.625, 1e-15);
  EXPECT_NEAR(l.noise_transition(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(l.noise_transition(0, 1), 0.2, 1e-15);
  EXPECT_NEAR(l.noise_transition(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(l.noise_transition(1, 1), 0.8, 1e-15);
  // p(latent = 0 | given = 0) = 0.375 / 0.5, stored at (latent, given).
  EXPECT_NEAR(l.mixing(0, 0), 0.75, 1e-15);
  EXPECT_NEAR(l.mixing(1, 0), 0.25, 1e-15);
  EXPECT_NEAR(l.mixing(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(l.observed_prior[0], 0.5, 1e-15);
}

TEST(LatentEstimates, DegenerateClass) {
  try {
    latent_estimates(JointMatrix(2, {0.5, 0, 0.5, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateClass);
  }
}

TEST(ClassWeights, HandExamples) {
  EXPECT_EQ(class_weights(JointMatrix(2, {0.5, 0, 0, 0.5})), (std::vector<double>{1, 1}));
  const auto w = class_weights(JointMatrix(2, {0.375, 0.125, 0, 0.5}));
  EXPECT_NEAR(w[0], 1.0, 1e-15);
  EXPECT_NEAR(w[1], 1.25, 1e-15);
  try {
    class_weights(JointMatrix(2, {0, 0.5, 0.5, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroDiagonal);
  }
}

TEST(EmpiricalJoint, CountsPairs) {
  const std::vector<ClassIndex> given{0, 0, 1, 1}, latent{0, 1, 1, 1};
  const auto q = empirical_joint(given, latent, 2);
  EXPECT_EQ(q.data(), (std::vector<double>{0.25, 0.25, 0, 0.5}));
}

TEST(JointFromTransition, ProductWithPrior) {
  const ConditionalMatrix t(2, {0.8, 0.3, 0.2, 0.7}, Conditioning::NoiseTransition);
  const auto q = joint_from_transition(t, PriorVector({0.5, 0.5}));
  EXPECT_NEAR(q(0, 1), 0.15, 1e-15);
  EXPECT_NEAR(q(1, 0), 0.1, 1e-15);
}
