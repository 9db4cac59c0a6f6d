// cleanjoint/report.hpp

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

// JSON report encoding. Keys keep insertion order so reports are stable and
// readable; matrices are arrays of rows. Doubles are printed in shortest
// round-trip form, so parsing a report gives back the exact values.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "cleanjoint/confident_joint.hpp"
#include "cleanjoint/eval.hpp"
#include "cleanjoint/joint_estimation.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/noise_lab.hpp"
#include "cleanjoint/rank_prune.hpp"

namespace cleanjoint {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportVersion = "1.0";

template <class T>
Json to_json(const Dense<T>& a) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Reads an array-of-rows matrix back; fails with Parse on ragged or
/// non-numeric input.
inline Dense<double> dense_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    detail::fail(ErrorKind::Parse, "matrix must be a non-empty array of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Dense<double> a(rows, cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) detail::fail(ErrorKind::Parse, "matrix row " + std::to_string(r) + " is ragged");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) detail::fail(ErrorKind::Parse, "matrix entry is not a number");
      a(r, c) = j[r][c].get<double>();
    }
  }
  return a;
}

inline Json to_json(const ErrorReport& r) {
  return Json{{"name", std::string(to_string(r.method))},
              {"flagged", r.flagged},
              {"scores", r.scores},
              {"rank_rule", std::string(to_string(r.rank_rule))}};
}

inline Json to_json(const ErrorMetrics& e) {
  return Json{{"accuracy", e.accuracy},
              {"precision", e.precision},
              {"recall", e.recall},
              {"f1", e.f1},
              {"accuracy_definition", "flag versus true flip as a binary decision, over all examples"}};
}

inline Json to_json(const JointError& e) { return Json{{"rmse", e.rmse}, {"max_abs", e.max_abs}}; }

inline Json to_json(const LearnabilityReport& r) {
  Json classes = Json::array();
  for (const auto& c : r.classes) {
    Json nb = c.n_bound.threshold ? Json(*c.n_bound.threshold) : Json(nullptr);
    classes.push_back(Json{{"class_conditional", c.class_conditional},
                           {"class_product", c.class_product},
                           {"n_bound", c.n_bound.pass},
                           {"n_threshold", nb},
                           {"d_bound", c.d_bound}});
  }
  return Json{{"trace_noise_transition", r.trace_noise_transition},
              {"trace_mixing", r.trace_mixing},
              {"trace_bound", r.trace_bound},
              {"class_conditional_bound", r.class_conditional_bound()},
              {"class_product_bound", r.class_product_bound()},
              {"n_bound", r.n_bound_all()},
              {"n", r.n},
              {"all_pass", r.all_pass()},
              {"classes", classes}};
}

inline Json to_json(const SuiteReport& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases)
    cases.push_back(Json{{"check", c.check},
                         {"m", c.m},
                         {"noise", c.noise},
                         {"sparsity", c.sparsity},
                         {"seed", c.seed},
                         {"outcome", std::string(to_string(c.outcome))},
                         {"detail", c.detail}});
  return Json{{"pass", r.count(CaseOutcome::Pass)},
              {"fail", r.count(CaseOutcome::Fail)},
              {"hypotheses_not_met", r.count(CaseOutcome::HypothesesNotMet)},
              {"all_pass", r.all_pass()},
              {"cases", cases}};
}

inline Json to_json(const RmseReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back(Json{{"noise", x.noise},
                        {"sparsity", x.sparsity},
                        {"seed", x.seed},
                        {"confident_joint", to_json(x.confident)},
                        {"confusion", to_json(x.confusion)}});
  return Json{{"mean_rmse_confident_joint", r.mean_rmse_confident()},
              {"mean_rmse_confusion", r.mean_rmse_confusion()},
              {"max_rmse_confident_joint", r.max_rmse_confident()},
              {"rows", rows}};
}

/// Estimation section of a report: thresholds, counts, joint, latent
/// matrices, sparsity and class weights. Quantities that are undefined for
/// this joint are null and explained in `warnings`.
inline void add_estimates(Json& report, const ThresholdVector& thresholds, const CountMatrix& counts,
                          const JointMatrix& q, std::vector<std::string>& warnings) {
  report["thresholds"] = thresholds.values();
  report["confident_joint"] = to_json(counts.dense());
  report["joint"] = to_json(q.dense());
  try {
    const LatentEstimates l = latent_estimates(q);
    report["noise_transition"] = to_json(l.noise_transition.dense());
    report["mixing"] = to_json(l.mixing.dense());
    report["priors"] = Json{{"latent", l.latent_prior.values()}, {"given", l.observed_prior.values()}};
  } catch (const Error& e) {
    warnings.push_back(e.what());
    report["noise_transition"] = nullptr;
    report["mixing"] = nullptr;
    std::vector<double> latent(q.size()), given(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      latent[i] = q.col_total(i);
      given[i] = q.row_total(i);
    }
    report["priors"] = Json{{"latent", latent}, {"given", given}};
  }
  report["sparsity"] = sparsity(q);
  try {
    report["class_weights"] = class_weights(q);
  } catch (const Error& e) {
    warnings.push_back(e.what());
    report["class_weights"] = nullptr;
  }
}

}  // namespace cleanjoint
