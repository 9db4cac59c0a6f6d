// tests/matrix_test.cpp

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

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "cleanjoint/matrix.hpp"
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

}  // namespace

TEST(ProbMatrix, RejectsBadShapesAndEntries) {
  EXPECT_EQ(kind_of([] { ProbMatrix(0, 2, {}); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { ProbMatrix(1, 1, {1.0}); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { ProbMatrix(1, 2, {0.5, std::numeric_limits<double>::quiet_NaN()}); }), ErrorKind::NonFiniteEntry);
  EXPECT_EQ(kind_of([] { ProbMatrix(1, 2, {0.5, std::numeric_limits<double>::infinity()}, true); }),
            ErrorKind::NonFiniteEntry);
  EXPECT_EQ(kind_of([] { ProbMatrix(1, 2, {1.5, 0.0}); }), ErrorKind::ProbabilityOutOfRange);
  EXPECT_NO_THROW(ProbMatrix(1, 2, {1.5, -0.2}, true));
  // Rows need not sum to one.
  EXPECT_NO_THROW(ProbMatrix(2, 2, {0.9, 0.9, 0.1, 0.1}));
}

TEST(LabelVector, ValidatesRangeAndCoverage) {
  EXPECT_NO_THROW(LabelVector({0, 0, 1, 1}, 2));
  EXPECT_EQ(kind_of([] { LabelVector({0, 0, 1, 2}, 2); }), ErrorKind::LabelOutOfRange);
  EXPECT_EQ(kind_of([] { LabelVector({0, 0, 0, 0}, 2); }), ErrorKind::EmptyClass);
  EXPECT_EQ(kind_of([] { LabelVector({0, -1}, 2); }), ErrorKind::LabelOutOfRange);
  const LabelVector y({1, 0, 1, 1}, 2);
  EXPECT_EQ(y.class_size(0), 1u);
  EXPECT_EQ(y.class_size(1), 3u);
}

TEST(ValidateInputs, ChecksAgreementAndIsIdempotent) {
  const auto p = testing_util::demo_probs();
  const auto y = testing_util::demo_labels();
  const auto once = validate_inputs(p, y);
  const auto twice = validate_inputs(once.first, once.second);
  EXPECT_EQ(once.first.dense(), twice.first.dense());
  EXPECT_EQ(once.second, twice.second);
  EXPECT_EQ(p.dense(), once.first.dense());

  EXPECT_EQ(kind_of([&] { check_inputs(p, LabelVector({0, 1, 1}, 2)); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { check_inputs(p, LabelVector({0, 1, 2, 2}, 3)); }), ErrorKind::DimensionMismatch);
}

TEST(MakeInputs, ReportsRawLabelProblems) {
  std::vector<double> p{0.9, 0.1, 0.4, 0.6, 0.2, 0.8, 0.3, 0.7};
  EXPECT_EQ(kind_of([&] { make_inputs(4, 2, p, {0, 0, 1, 2}); }), ErrorKind::LabelOutOfRange);
  EXPECT_EQ(kind_of([&] { make_inputs(4, 2, p, {0, 0, 0, 0}); }), ErrorKind::EmptyClass);
  EXPECT_EQ(kind_of([&] { make_inputs(4, 2, p, {0, 0, 1}); }), ErrorKind::DimensionMismatch);
}

TEST(MakeInputs, CanDropEmptyClasses) {
  // Three columns, class 1 never labelled.
  std::vector<double> p{0.7, 0.2, 0.1, 0.1, 0.3, 0.6, 0.5, 0.1, 0.4};
  ValidateOptions opts;
  opts.drop_empty_classes = true;
  const Inputs in = make_inputs(3, 3, p, {0, 2, 0}, opts);
  EXPECT_EQ(in.probs.cols(), 2u);
  EXPECT_EQ(in.class_map, (std::vector<ClassIndex>{0, 2}));
  EXPECT_EQ(in.labels[1], 1);
  EXPECT_DOUBLE_EQ(in.probs(1, 1), 0.6);
  ASSERT_EQ(in.warnings.size(), 1u);
}

TEST(JointMatrix, EnforcesDistribution) {
  EXPECT_NO_THROW(JointMatrix(2, {0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(kind_of([] { JointMatrix(2, {0.5, 0.5, 0.5, 0.5}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { JointMatrix(2, {1.25, -0.25, 0.0, 0.0}); }), ErrorKind::InvalidArgument);
}

TEST(ConditionalMatrix, ColumnsMustSumToOne) {
  EXPECT_NO_THROW(ConditionalMatrix(2, {0.8, 0.3, 0.2, 0.7}, Conditioning::NoiseTransition));
  EXPECT_EQ(kind_of([] { ConditionalMatrix(2, {0.8, 0.2, 0.3, 0.7}, Conditioning::NoiseTransition); }),
            ErrorKind::InvalidArgument);
}

TEST(PriorVector, SumsToOne) {
  EXPECT_NO_THROW(PriorVector({0.09, 0.12, 0.79}));
  EXPECT_EQ(kind_of([] { PriorVector({0.5, 0.6}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { PriorVector({1.5, -0.5}); }), ErrorKind::InvalidArgument);
}

TEST(Sparsity, CountsZeroOffDiagonals) {
  EXPECT_DOUBLE_EQ(sparsity(JointMatrix(3, {0.2, 0, 0, 0, 0.3, 0, 0, 0, 0.5})), 1.0);
  EXPECT_DOUBLE_EQ(sparsity(JointMatrix(2, {0.4, 0.1, 0.1, 0.4})), 0.0);
  EXPECT_DOUBLE_EQ(sparsity(JointMatrix(3, {0.2, 0.1, 0, 0, 0.2, 0.1, 0.1, 0, 0.3})), 0.5);
  // Epsilon clamp.
  EXPECT_DOUBLE_EQ(sparsity(JointMatrix(2, {0.5 - 1e-12, 1e-12, 0.0, 0.5}), 1e-9), 1.0);
}

TEST(Sparsity, InvariantUnderClassPermutation) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + gen() % 6;
    std::vector<double> q(m * m);
    double s = 0.0;
    for (auto& v : q) s += (v = u(gen) < 0.4 ? 0.0 : u(gen));
    if (s == 0.0) continue;
    for (auto& v : q) v /= s;
    std::vector<double> fixed = q;
    double t = std::accumulate(fixed.begin(), fixed.end(), 0.0);
    *std::max_element(fixed.begin(), fixed.end()) += 1.0 - t;
    const JointMatrix joint(m, fixed);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    EXPECT_DOUBLE_EQ(sparsity(permute_classes(joint, perm)), sparsity(joint));
  }
}
