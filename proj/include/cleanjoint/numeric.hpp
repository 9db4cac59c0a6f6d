// cleanjoint/numeric.hpp

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

#include <cmath>
#include <cstddef>
#include <span>

namespace cleanjoint {

/// Kahan-Babuska (Neumaier) compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Arithmetic mean accumulated in insertion order.
///
/// Values are accumulated as offsets from the first value seen, so a run of
/// identical values yields that value bit-exactly (a plain sum-then-divide can
/// land one ulp away, which matters for inclusive threshold tests).
class ShiftedMean {
 public:
  void add(double x) {
    if (count_ == 0) shift_ = x;
    acc_.add(x - shift_);
    ++count_;
  }
  std::size_t count() const { return count_; }
  double value() const {
    if (count_ == 0) return 0.0;
    return shift_ + acc_.value() / static_cast<double>(count_);
  }

 private:
  double shift_ = 0.0;
  CompensatedSum acc_;
  std::size_t count_ = 0;
};

/// Index of the largest value; ties go to the lowest index.
inline std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j)
    if (values[j] > values[best]) best = j;
  return best;
}

/// Round half away from zero for non-negative inputs ("half-up").
inline long long round_half_up(double x) { return static_cast<long long>(std::floor(x + 0.5)); }

}  // namespace cleanjoint
