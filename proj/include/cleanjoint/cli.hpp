// cleanjoint/cli.hpp

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

// The cleanjoint command line. run() takes the arguments after the program
// name and returns the process exit code:
//   0  success
//   1  unreadable file or malformed CSV
//   2  invalid input, option or specification
//   3  internal error, or a suite case that failed
// Every command prints a JSON report to stdout, or to --out.

#pragma once

#include <algorithm>
#include <chrono>
#include <ctime>
#include <exception>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cleanjoint/confident_joint.hpp"
#include "cleanjoint/error.hpp"
#include "cleanjoint/eval.hpp"
#include "cleanjoint/io.hpp"
#include "cleanjoint/joint_estimation.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/noise_lab.hpp"
#include "cleanjoint/rank_prune.hpp"
#include "cleanjoint/report.hpp"

namespace cleanjoint::cli {

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  bool no_meta = false;
};

namespace detail {

using cleanjoint::detail::fail;

inline void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out,-o", c.out, "write the JSON report here instead of stdout");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_flag("--no-meta", c.no_meta, "omit the metadata block (timestamp)");
}

inline Json start_report() {
  Json r;
  r["version"] = kReportVersion;
  return r;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void emit(Json& report, const std::vector<std::string>& warnings, const Common& c, std::ostream& out) {
  report["warnings"] = warnings;
  if (!c.no_meta) report["meta"] = Json{{"tool", "cleanjoint"}, {"created", utc_timestamp()}};
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty())
    out << text;
  else
    write_file(c.out, text);
}

struct LoadedFile {
  std::string path;
  std::string bytes;
};

inline LoadedFile load(const std::string& path) { return {path, read_file(path)}; }

inline Json describe(const LoadedFile& f) { return Json{{"path", f.path}, {"checksum", fnv1a_hex(f.bytes)}}; }

inline CsvTable parse_matrix(const LoadedFile& f) {
  std::istringstream in(f.bytes);
  CsvTable t = read_csv(in, f.path);
  if (t.rows == 0) fail(ErrorKind::Parse, f.path + ": no data rows");
  return t;
}

inline std::vector<long long> parse_labels(const LoadedFile& f) {
  std::istringstream in(f.bytes);
  return read_labels(in, f.path);
}

inline Dense<double> square_matrix(const LoadedFile& f) {
  const CsvTable t = parse_matrix(f);
  if (t.rows != t.cols)
    fail(ErrorKind::ShapeMismatch, f.path + " is " + std::to_string(t.rows) + "x" + std::to_string(t.cols) +
                                       ", expected a square matrix");
  return Dense<double>(t.rows, t.cols, t.values);
}

inline std::vector<ClassIndex> to_class_indices(const std::vector<long long>& raw, std::size_t m, const std::string& what) {
  std::vector<ClassIndex> out(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] < 0 || static_cast<unsigned long long>(raw[k]) >= m)
      fail(ErrorKind::LabelOutOfRange, what + " label " + std::to_string(raw[k]) + " at index " + std::to_string(k) +
                                           " is not in [0, " + std::to_string(m) + ")");
    out[k] = static_cast<ClassIndex>(raw[k]);
  }
  return out;
}

struct DataOptions {
  std::string probs;
  std::string labels;
  bool allow_unnormalized = false;
  bool drop_empty = false;
};

inline void add_data(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--probs", d.probs, "n x m predicted probabilities (CSV)")->required();
  cmd->add_option("--labels", d.labels, "n given labels, one per line")->required();
  cmd->add_flag("--allow-unnormalized", d.allow_unnormalized, "accept probabilities outside [0, 1]");
  cmd->add_flag("--drop-empty-classes", d.drop_empty, "drop classes without any labelled example");
}

struct Loaded {
  Inputs inputs;
  Json description;
};

inline Loaded load_data(const DataOptions& d) {
  const LoadedFile pf = load(d.probs);
  const LoadedFile lf = load(d.labels);
  CsvTable t = parse_matrix(pf);
  const auto raw = parse_labels(lf);
  ValidateOptions opts;
  opts.allow_unnormalized = d.allow_unnormalized;
  opts.drop_empty_classes = d.drop_empty;
  Inputs in = make_inputs(t.rows, t.cols, std::move(t.values), raw, opts);
  Json desc{{"probs", describe(pf)},
            {"labels", describe(lf)},
            {"n", in.probs.rows()},
            {"m", in.probs.cols()},
            {"class_map", in.class_map}};
  return {std::move(in), std::move(desc)};
}

inline Method method_or_fail(const std::string& s) {
  const auto m = parse_method(s);
  if (!m) fail(ErrorKind::InvalidArgument, "unknown method '" + s + "' (expected confusion, cj, pbc, pbnr or cnr)");
  return *m;
}

inline RankRule rank_or_fail(const std::string& s) {
  const auto r = parse_rank_rule(s);
  if (!r) fail(ErrorKind::InvalidArgument, "unknown rank rule '" + s + "' (expected margin or selfconf)");
  return *r;
}

inline std::vector<double> prior_or_uniform(const std::vector<double>& p, std::size_t m) {
  if (p.empty()) return PriorVector::uniform(m).values();
  if (p.size() != m) fail(ErrorKind::DimensionMismatch, "prior needs one entry per class");
  return PriorVector(p).values();
}

inline std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = first + i;
  return s;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"cleanjoint: find label errors with the confident joint", "cleanjoint"};
  app.require_subcommand(1);

  Common common;
  DataOptions data;
  std::string method_name, rank_name = "margin", true_labels;
  bool no_fallback = false;

  auto* estimate = app.add_subcommand("estimate", "thresholds, confident joint, calibrated joint and latent estimates");
  add_data(estimate, data);
  add_common(estimate, common);
  estimate->add_flag("--no-zero-row-fallback", no_fallback, "fail instead of repairing an all-zero count row");

  auto* find = app.add_subcommand("find-errors", "flag likely label errors");
  add_data(find, data);
  add_common(find, common);
  find->add_option("--method", method_name, "confusion, cj, pbc, pbnr or cnr")->required();
  find->add_option("--rank", rank_name, "margin or selfconf");
  find->add_option("--true-labels", true_labels, "latent labels, for scoring the flags");

  auto* prune_cmd = app.add_subcommand("prune", "flag errors and list the examples kept for training");
  add_data(prune_cmd, data);
  add_common(prune_cmd, common);
  prune_cmd->add_option("--method", method_name, "confusion, cj, pbc, pbnr or cnr")->required();
  prune_cmd->add_option("--rank", rank_name, "margin or selfconf");

  // synth
  auto* synth = app.add_subcommand("synth", "synthetic noise, labels and probabilities");
  synth->require_subcommand(1);
  std::size_t m = 0, n = 0;
  double trace = 0.0, sparsity_target = 0.0;
  bool no_dominance = false, iid = false;
  std::vector<double> prior, scale, shift, mean_error;
  std::string csv_out, noise_path, labels_path, given_path, mode_name = "ideal";

  auto* gen_noise = synth->add_subcommand("gen-noise", "random noise transition matrix p(given | latent)");
  add_common(gen_noise, common);
  gen_noise->add_option("-m,--classes", m, "class count")->required();
  gen_noise->add_option("--trace", trace, "trace of the matrix, in (1, m]")->required();
  gen_noise->add_option("--sparsity", sparsity_target, "fraction of zero off-diagonal entries, in [0, 1)");
  gen_noise->add_flag("--no-dominance", no_dominance, "do not force the diagonal to dominate rows and columns");
  gen_noise->add_option("--csv-out", csv_out, "also write the matrix as CSV");

  auto* gen_labels = synth->add_subcommand("labels", "latent labels matching a class prior");
  add_common(gen_labels, common);
  gen_labels->add_option("-m,--classes", m, "class count")->required();
  gen_labels->add_option("-n,--examples", n, "example count")->required();
  gen_labels->add_option("--prior", prior, "class prior, comma separated (default uniform)")->delimiter(',');
  gen_labels->add_option("--csv-out", csv_out, "also write the labels as CSV");

  auto* flip = synth->add_subcommand("flip", "draw given labels from latent labels through a noise matrix");
  add_common(flip, common);
  flip->add_option("--noise", noise_path, "noise transition matrix (CSV)")->required();
  flip->add_option("--labels", labels_path, "latent labels")->required();
  flip->add_option("--csv-out", csv_out, "also write the given labels as CSV");

  auto* probs_cmd = synth->add_subcommand("probs", "ideal or diffracted predicted probabilities");
  add_common(probs_cmd, common);
  probs_cmd->add_option("--noise", noise_path, "noise transition matrix (CSV)")->required();
  probs_cmd->add_option("--true-labels", labels_path, "latent labels")->required();
  probs_cmd->add_option("--given-labels", given_path, "given labels (needed for per-example)");
  probs_cmd->add_option("--mode", mode_name, "ideal, per-class or per-example");
  probs_cmd->add_option("--scale", scale, "per-class scale, comma separated")->delimiter(',');
  probs_cmd->add_option("--shift", shift, "per-class shift, comma separated")->delimiter(',');
  probs_cmd->add_option("--mean-error", mean_error, "per-class mean error, comma separated")->delimiter(',');
  probs_cmd->add_flag("--iid", iid, "draw per-example errors independently instead of in balanced pairs");
  probs_cmd->add_option("--csv-out", csv_out, "also write the probabilities as CSV");

  // eval
  auto* eval = app.add_subcommand("eval", "score estimates against ground truth");
  eval->require_subcommand(1);
  std::string estimate_path, truth_path, flagged_path;
  auto* eval_joint = eval->add_subcommand("joint", "RMSE and max error between two joint matrices");
  add_common(eval_joint, common);
  eval_joint->add_option("--estimate", estimate_path, "estimated joint (CSV)")->required();
  eval_joint->add_option("--truth", truth_path, "true joint (CSV)")->required();
  auto* eval_errors = eval->add_subcommand("errors", "accuracy, precision, recall and F1 of flagged indices");
  add_common(eval_errors, common);
  eval_errors->add_option("--flagged", flagged_path, "flagged example indices, one per line")->required();
  eval_errors->add_option("--labels", labels_path, "given labels")->required();
  eval_errors->add_option("--true-labels", true_labels, "latent labels")->required();

  // check
  auto* check = app.add_subcommand("check", "learnability conditions");
  check->require_subcommand(1);
  std::string joint_path;
  double n_scale = 1.0;
  auto* learn = check->add_subcommand("learnability", "trace, class product, class conditional and n bounds");
  add_common(learn, common);
  auto* joint_opt = learn->add_option("--joint", joint_path, "joint p(given, latent) (CSV)");
  auto* noise_opt = learn->add_option("--noise", noise_path, "noise transition matrix (CSV)");
  joint_opt->excludes(noise_opt);
  learn->add_option("--prior", prior, "latent prior for --noise, comma separated (default uniform)")->delimiter(',');
  learn->add_option("-n,--examples", n_scale, "example count used for the n bound (default 1: fractions)");

  // suite
  auto* suite = app.add_subcommand("suite", "exactness suite and estimation study on synthetic noise");
  suite->require_subcommand(1);
  std::size_t seeds = 10, threads = 0;
  std::vector<std::size_t> classes;
  std::vector<double> noise_grid, sparsity_grid;
  auto* theorems = suite->add_subcommand("theorems", "check exact recovery over a grid of generated noise");
  add_common(theorems, common);
  theorems->add_option("--seeds", seeds, "number of seeds, starting at --seed");
  theorems->add_option("-n,--examples", n, "examples per instance (default 3000)");
  theorems->add_option("--classes", classes, "class counts, comma separated")->delimiter(',');
  theorems->add_option("--noise", noise_grid, "noise levels, comma separated")->delimiter(',');
  theorems->add_option("--sparsity", sparsity_grid, "sparsity levels, comma separated")->delimiter(',');
  theorems->add_flag("--no-dominance", no_dominance, "do not force diagonal dominance");
  theorems->add_option("--threads", threads, "worker threads (default CLEANJOINT_THREADS or all cores)");
  auto* rmse = suite->add_subcommand("rmse", "joint estimation error under per-class diffraction");
  add_common(rmse, common);
  rmse->add_option("--seeds", seeds, "number of seeds, starting at --seed");
  rmse->add_option("-n,--examples", n, "examples per instance (default 5000)");
  rmse->add_option("-m,--classes", m, "class count (default 10)");
  rmse->add_option("--noise", noise_grid, "noise levels, comma separated")->delimiter(',');
  rmse->add_option("--sparsity", sparsity_grid, "sparsity levels, comma separated")->delimiter(',');
  rmse->add_option("--threads", threads, "worker threads (default CLEANJOINT_THREADS or all cores)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<std::string> warnings;
  try {
    Json report = start_report();

    if (estimate->parsed()) {
      Loaded d = load_data(data);
      warnings = d.inputs.warnings;
      report["inputs"] = d.description;
      const ThresholdVector t = compute_thresholds(d.inputs.probs, d.inputs.labels);
      const ConfidentJointResult cj = confident_joint(d.inputs.probs, d.inputs.labels, t);
      CalibrateOptions copts;
      copts.zero_row_fallback = !no_fallback;
      const JointMatrix q = calibrate(cj.counts, d.inputs.labels, copts, &warnings);
      add_estimates(report, t, cj.counts, q, warnings);
      report["collisions"] = cj.collisions;
      report["learnability"] = to_json(check_learnability(q, static_cast<double>(d.inputs.probs.rows())));
      emit(report, warnings, common, out);
      return 0;
    }

    if (find->parsed() || prune_cmd->parsed()) {
      const Method method = method_or_fail(method_name);
      const RankRule rule = rank_or_fail(rank_name);
      Loaded d = load_data(data);
      warnings = d.inputs.warnings;
      report["inputs"] = d.description;
      const ErrorReport er = find_errors(d.inputs.probs, d.inputs.labels, method, rule, &warnings);
      report["methods"] = Json::array({to_json(er)});
      if (prune_cmd->parsed()) {
        const JointMatrix q = calibrate(confident_joint(d.inputs.probs, d.inputs.labels).counts, d.inputs.labels);
        std::vector<char> drop(d.inputs.labels.size(), 0);
        for (std::size_t k : er.flagged) drop[k] = 1;
        std::vector<std::size_t> kept;
        for (std::size_t k = 0; k < drop.size(); ++k)
          if (!drop[k]) kept.push_back(k);
        report["kept"] = kept;
        try {
          report["class_weights"] = class_weights(q);
        } catch (const Error& e) {
          warnings.push_back(e.what());
          report["class_weights"] = nullptr;
        }
      }
      if (!true_labels.empty()) {
        const LoadedFile tf = load(true_labels);
        report["inputs"]["true_labels"] = describe(tf);
        const auto latent = to_class_indices(parse_labels(tf), d.inputs.probs.cols(), "true");
        if (latent.size() != d.inputs.labels.size())
          fail(ErrorKind::DimensionMismatch, "true labels differ in length from given labels");
        const auto flips = true_flips(d.inputs.labels.values(), latent);
        report["metrics"] = to_json(score_errors(er.flagged, flips, latent.size()));
      }
      emit(report, warnings, common, out);
      return 0;
    }

    if (gen_noise->parsed()) {
      NoiseSpec spec;
      spec.m = m;
      spec.trace = trace;
      spec.sparsity = sparsity_target;
      spec.seed = common.seed;
      spec.dominance = !no_dominance;
      const ConditionalMatrix t = gen_noise_matrix(spec);
      report["spec"] = Json{{"m", m}, {"trace", trace}, {"sparsity", sparsity_target}, {"seed", common.seed},
                            {"dominance", spec.dominance}};
      report["noise_transition"] = to_json(t.dense());
      report["trace"] = t.trace();
      report["sparsity"] = sparsity(t);
      report["learnability"] = to_json(check_learnability(t, PriorVector::uniform(m)));
      if (!csv_out.empty()) {
        std::ostringstream s;
        write_csv(s, t.dense());
        write_file(csv_out, s.str());
      }
      emit(report, warnings, common, out);
      return 0;
    }

    if (gen_labels->parsed()) {
      const PriorVector p(prior_or_uniform(prior, m));
      const auto y = sample_latent_labels(n, p, common.seed);
      report["spec"] = Json{{"m", m}, {"n", n}, {"prior", p.values()}, {"seed", common.seed}};
      report["labels"] = y;
      if (!csv_out.empty()) {
        std::ostringstream s;
        write_labels<ClassIndex>(s, y);
        write_file(csv_out, s.str());
      }
      emit(report, warnings, common, out);
      return 0;
    }

    if (flip->parsed()) {
      const LoadedFile nf = load(noise_path);
      const LoadedFile lf = load(labels_path);
      const Dense<double> raw = square_matrix(nf);
      const ConditionalMatrix t(raw.rows(), raw.data(), Conditioning::NoiseTransition);
      const auto latent = to_class_indices(parse_labels(lf), t.size(), "latent");
      const auto given = flip_labels(latent, t, common.seed);
      report["inputs"] = Json{{"noise", describe(nf)}, {"labels", describe(lf)}, {"n", latent.size()}, {"m", t.size()}};
      report["seed"] = common.seed;
      report["labels"] = given;
      report["flipped"] = true_flips(given, latent);
      if (!csv_out.empty()) {
        std::ostringstream s;
        write_labels<ClassIndex>(s, given);
        write_file(csv_out, s.str());
      }
      emit(report, warnings, common, out);
      return 0;
    }

    if (probs_cmd->parsed()) {
      const LoadedFile nf = load(noise_path);
      const LoadedFile lf = load(labels_path);
      const Dense<double> raw = square_matrix(nf);
      const ConditionalMatrix t(raw.rows(), raw.data(), Conditioning::NoiseTransition);
      const auto latent = to_class_indices(parse_labels(lf), t.size(), "latent");
      DiffractionSpec ds;
      ds.seed = common.seed;
      ds.balanced = !iid;
      Json in{{"noise", describe(nf)}, {"true_labels", describe(lf)}, {"n", latent.size()}, {"m", t.size()}};
      std::vector<ClassIndex> given;
      if (mode_name == "ideal") {
        ds.mode = DiffractionMode::Ideal;
      } else if (mode_name == "per-class") {
        ds.mode = DiffractionMode::PerClass;
        ds.scale = scale.empty() ? std::vector<double>(t.size(), 1.0) : scale;
        ds.shift = shift.empty() ? std::vector<double>(t.size(), 0.0) : shift;
      } else if (mode_name == "per-example") {
        ds.mode = DiffractionMode::PerExample;
        ds.mean_error = mean_error.empty() ? std::vector<double>(t.size(), 0.0) : mean_error;
        if (given_path.empty()) fail(ErrorKind::InvalidArgument, "per-example mode needs --given-labels");
        const LoadedFile gf = load(given_path);
        in["given_labels"] = describe(gf);
        given = to_class_indices(parse_labels(gf), t.size(), "given");
      } else {
        fail(ErrorKind::InvalidArgument, "unknown mode '" + mode_name + "' (expected ideal, per-class or per-example)");
      }
      const ProbMatrix p = gen_probs(latent, t, ds, given);
      report["inputs"] = in;
      report["mode"] = mode_name;
      report["seed"] = common.seed;
      report["probs"] = to_json(p.dense());
      if (!csv_out.empty()) {
        std::ostringstream s;
        write_csv(s, p.dense());
        write_file(csv_out, s.str());
      }
      emit(report, warnings, common, out);
      return 0;
    }

    if (eval_joint->parsed()) {
      const LoadedFile ef = load(estimate_path);
      const LoadedFile tf = load(truth_path);
      const CsvTable e = parse_matrix(ef);
      const CsvTable t = parse_matrix(tf);
      report["inputs"] = Json{{"estimate", describe(ef)}, {"truth", describe(tf)}};
      report["metrics"] = to_json(score_joint(Dense<double>(e.rows, e.cols, e.values), Dense<double>(t.rows, t.cols, t.values)));
      emit(report, warnings, common, out);
      return 0;
    }

    if (eval_errors->parsed()) {
      const LoadedFile ff = load(flagged_path);
      const LoadedFile gf = load(labels_path);
      const LoadedFile tf = load(true_labels);
      const auto given = parse_labels(gf);
      const auto latent = parse_labels(tf);
      if (given.size() != latent.size()) fail(ErrorKind::DimensionMismatch, "given and true labels differ in length");
      std::vector<std::size_t> flagged, flips;
      for (long long k : parse_labels(ff)) {
        if (k < 0) fail(ErrorKind::InvalidArgument, "flagged index " + std::to_string(k) + " is negative");
        flagged.push_back(static_cast<std::size_t>(k));
      }
      for (std::size_t k = 0; k < given.size(); ++k)
        if (given[k] != latent[k]) flips.push_back(k);
      report["inputs"] = Json{{"flagged", describe(ff)}, {"labels", describe(gf)}, {"true_labels", describe(tf)},
                              {"n", given.size()}};
      report["metrics"] = to_json(score_errors(flagged, flips, given.size()));
      emit(report, warnings, common, out);
      return 0;
    }

    if (learn->parsed()) {
      if (joint_path.empty() == noise_path.empty()) fail(ErrorKind::InvalidArgument, "give exactly one of --joint or --noise");
      LearnabilityReport lr;
      if (!joint_path.empty()) {
        const LoadedFile jf = load(joint_path);
        const Dense<double> raw = square_matrix(jf);
        report["inputs"] = Json{{"joint", describe(jf)}};
        lr = check_learnability(JointMatrix(raw.rows(), raw.data()), n_scale);
      } else {
        const LoadedFile nf = load(noise_path);
        const Dense<double> raw = square_matrix(nf);
        const ConditionalMatrix t(raw.rows(), raw.data(), Conditioning::NoiseTransition);
        const PriorVector p(prior_or_uniform(prior, t.size()));
        report["inputs"] = Json{{"noise", describe(nf)}, {"prior", p.values()}};
        lr = check_learnability(t, p, n_scale);
      }
      report["learnability"] = to_json(lr);
      emit(report, warnings, common, out);
      return 0;
    }

    if (theorems->parsed()) {
      SuiteConfig cfg;
      cfg.seeds = seed_range(common.seed, seeds);
      if (n) cfg.n = n;
      if (!classes.empty()) cfg.class_counts = classes;
      if (!noise_grid.empty()) cfg.noise = noise_grid;
      if (!sparsity_grid.empty()) cfg.sparsity = sparsity_grid;
      cfg.dominance = !no_dominance;
      cfg.threads = threads;
      const SuiteReport sr = run_theorem_suite(cfg);
      report["config"] = Json{{"seeds", cfg.seeds}, {"n", cfg.n}, {"classes", cfg.class_counts},
                              {"noise", cfg.noise}, {"sparsity", cfg.sparsity}, {"dominance", cfg.dominance}};
      report["suite"] = to_json(sr);
      emit(report, warnings, common, out);
      return sr.all_pass() ? 0 : 3;
    }

    if (rmse->parsed()) {
      RmseConfig cfg;
      cfg.seeds = seed_range(common.seed, seeds);
      if (n) cfg.n = n;
      if (m) cfg.m = m;
      if (!noise_grid.empty()) cfg.noise = noise_grid;
      if (!sparsity_grid.empty()) cfg.sparsity = sparsity_grid;
      cfg.threads = threads;
      const RmseReport rr = rmse_study(cfg);
      report["config"] = Json{{"seeds", cfg.seeds}, {"n", cfg.n}, {"m", cfg.m}, {"noise", cfg.noise},
                              {"sparsity", cfg.sparsity}};
      report["rmse"] = to_json(rr);
      emit(report, warnings, common, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return 3;
  }
  err << "error: no command given\n";
  return 2;
}

}  // namespace cleanjoint::cli
