// ldvec/cli.cc

// Copyright 2026 The ldvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldvec/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "ldvec/evaluation.h"
#include "ldvec/scoring.h"
#include "ldvec/synth.h"
#include "ldvec/training.h"

namespace ldvec {

namespace fs = std::filesystem;

namespace {

struct SimulateArgs {
  std::string out;
  int langs = 0, rdim = 0, fdim = 0, comps = 0, segs = 0;
  std::string frames;
  double sep = 1.0;
  std::uint64_t seed = 0;
};

struct StatsArgs {
  std::string features, ubm, tmatrix, out;
  double prune = 0.0;
};

struct TrainArgs {
  std::string stats, tmatrix, out;
  int iters = 20;
  double tol = 1e-6;
  double floor = 1e-8;
};

struct ScoreArgs {
  std::string stats, ivectors, backend, tmatrix, scorer, out;
};

struct EvalArgs {
  std::string scores, out;
};

struct ExtractArgs {
  std::string stats, tmatrix, out;
};

struct RecoverArgs {
  std::string ivectors, tmatrix, out;
};

/// "T" or "A..B".
std::pair<int, int> ParseFrames(const std::string &text) {
  auto parse_int = [&](std::string_view s) {
    int v = -1;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    Require(ec == std::errc() && ptr == s.data() + s.size() && v >= 0,
            ErrorCode::kInvalidArgument, "bad --frames value '" + text + "'");
    return v;
  };
  std::size_t dots = text.find("..");
  if (dots == std::string::npos) {
    int t = parse_int(text);
    return {t, t};
  }
  int lo = parse_int(std::string_view(text).substr(0, dots));
  int hi = parse_int(std::string_view(text).substr(dots + 2));
  Require(lo <= hi, ErrorCode::kInvalidArgument, "--frames range must have A <= B");
  return {lo, hi};
}

void EnsureDir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  Require(!ec && fs::is_directory(dir), ErrorCode::kIo, "cannot create directory " + dir.string());
}

void EnsureParent(const fs::path &file) {
  if (file.has_parent_path()) EnsureDir(file.parent_path());
}

void WriteText(const fs::path &path, const std::string &text) {
  EnsureParent(path);
  std::ofstream os(path, std::ios::trunc);
  Require(static_cast<bool>(os), ErrorCode::kIo, "cannot write " + path.string());
  os << text;
  Require(static_cast<bool>(os), ErrorCode::kIo, "write failed: " + path.string());
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int RunSimulate(const SimulateArgs &a, std::ostream &err) {
  SynthConfig cfg;
  cfg.dims = Dims{a.fdim, a.rdim, a.comps, a.langs};
  std::tie(cfg.frames_min, cfg.frames_max) = ParseFrames(a.frames);
  cfg.segments_per_language = a.segs;
  cfg.class_separation = a.sep;
  cfg.seed = a.seed;
  cfg.Validate();

  auto [models, data] = MakeDataset(cfg);
  fs::path dir(a.out);
  EnsureDir(dir);
  SaveUbm(models.ubm, dir / "ubm.manifest", "arrays");
  SaveTMatrix(models.t, dir / "tmatrix.manifest", "arrays");
  SaveBackend(models.backend, dir / "backend.manifest", "arrays");
  SaveStats(data.stats, dir / "stats.manifest", "arrays");
  SaveTruth(models.backend, data.true_ivectors, data.features.labels, dir / "truth.manifest",
            "arrays");
  EnsureDir(dir / "features");
  SaveFeatures(data.features, dir / "features" / "features.manifest");
  err << "simulate: wrote " << data.stats.size() << " segments to " << dir.string() << "\n";
  return kExitOk;
}

int RunStats(const StatsArgs &a, std::ostream &err) {
  fs::path manifest = fs::path(a.features) / "features.manifest";
  Require(fs::is_directory(a.features) && fs::exists(manifest), ErrorCode::kInvalidArgument,
          "feature directory " + a.features + " holds no features.manifest");
  FeatureSet features = LoadFeatures(manifest);
  Ubm ubm = LoadUbm(a.ubm);
  TMatrix t = LoadTMatrix(a.tmatrix);
  Require(features.feat_dim == ubm.feat_dim(), ErrorCode::kDimensionMismatch,
          "feature dimension differs from the UBM");
  Require(t.num_components() == ubm.num_components() && t.feat_dim() == ubm.feat_dim(),
          ErrorCode::kDimensionMismatch, "T does not match the UBM");
  Require(a.prune >= 0.0 && a.prune < 1.0, ErrorCode::kInvalidArgument,
          "--prune must be in [0, 1)");
  StatsDataset stats = ComputeDatasetStats(features, ubm, t, a.prune);
  EnsureParent(a.out);
  SaveStats(stats, a.out);
  err << "stats: " << stats.size() << " segments -> " << a.out << "\n";
  return kExitOk;
}

int RunTrain(const TrainArgs &a, std::ostream &err) {
  StatsDataset stats = LoadStats(a.stats);
  TMatrix t = LoadTMatrix(a.tmatrix);
  Require(stats.num_components == t.num_components() && stats.ivector_dim == t.ivector_dim(),
          ErrorCode::kDimensionMismatch, "stats do not match T");
  RequireLabels(stats);
  TrainConfig cfg;
  cfg.max_iters = a.iters;
  cfg.rel_tol = a.tol;
  cfg.min_eig_floor = a.floor;
  cfg.Validate();
  auto [backend, report] = Train(stats, t, cfg);

  fs::path dir(a.out);
  EnsureDir(dir);
  SaveBackend(backend, dir / "backend.manifest");
  std::string log = "# ldvec train log\n";
  log += "segments = " + std::to_string(stats.size()) + "\n";
  log += "initial_bound = " + Num(report.initial_bound) + "\n";
  double prev = report.initial_bound;
  for (std::size_t k = 0; k < report.bounds.size(); ++k) {
    log += "iter " + std::to_string(k + 1) + " bound = " + Num(report.bounds[k]) +
           " gain = " + Num(report.bounds[k] - prev) + "\n";
    prev = report.bounds[k];
  }
  log += std::string("converged = ") + (report.converged ? "true" : "false") + "\n";
  log += std::string("monotone = ") + (report.monotone ? "true" : "false") + "\n";
  WriteText(dir / "train.log", log);
  err << "train: " << report.iters_run << " iterations, bound " << Num(prev)
      << (report.converged ? " (converged)" : "") << "\n";
  Require(report.monotone, ErrorCode::kBoundDecrease,
          "lower bound decreased during training; see train.log");
  return kExitOk;
}

int RunExtract(const ExtractArgs &a, std::ostream &err) {
  StatsDataset stats = LoadStats(a.stats);
  TMatrix t = LoadTMatrix(a.tmatrix);
  Require(stats.num_components == t.num_components() && stats.ivector_dim == t.ivector_dim(),
          ErrorCode::kDimensionMismatch, "stats do not match T");
  IvectorSet ivecs = ExtractIvectors(stats, t);
  EnsureParent(a.out);
  SaveIvectors(ivecs, a.out);
  err << "extract: " << ivecs.size() << " i-vectors -> " << a.out << "\n";
  return kExitOk;
}

int RunRecover(const RecoverArgs &a, std::ostream &err) {
  IvectorSet ivecs = LoadIvectors(a.ivectors);
  TMatrix t = LoadTMatrix(a.tmatrix);
  StatsDataset stats = RecoverStats(ivecs, t);
  EnsureParent(a.out);
  SaveStats(stats, a.out);
  err << "recover: " << stats.size() << " segments -> " << a.out << "\n";
  return kExitOk;
}

int RunScore(const ScoreArgs &a, std::ostream &err) {
  Backend backend = LoadBackend(a.backend);
  TMatrix t = LoadTMatrix(a.tmatrix);
  ScorerKind kind = ParseScorer(a.scorer);
  ScoreMatrix scores;
  if (!a.ivectors.empty()) {
    scores = ScoreFromIvectors(LoadIvectors(a.ivectors), backend, t, kind);
  } else {
    scores = ScoreDataset(LoadStats(a.stats), backend, t, kind);
  }
  EnsureParent(a.out);
  SaveScores(scores, a.out);
  err << "score: " << scores.scores.rows() << " x " << scores.scores.cols() << " ("
      << ScorerName(kind) << ") -> " << a.out << "\n";
  return kExitOk;
}

int RunEval(const EvalArgs &a, std::ostream &out, std::ostream &err) {
  ScoreMatrix scores = LoadScores(a.scores);
  EvalReport report = Evaluate(scores);
  WriteText(a.out, FormatKeyValues(report, ScorerName(scores.kind)));
  out << FormatReport(report, scores.languages, ScorerName(scores.kind));
  err << "eval: report -> " << a.out << "\n";
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kBadMagic:
    case ErrorCode::kUnsupportedVersion:
    case ErrorCode::kUnsupportedDtype:
    case ErrorCode::kTruncated:
    case ErrorCode::kBoundDecrease:
      return kExitRuntime;
    default:
      return kExitUsage;
  }
}

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Language-dependent i-vector posteriors and Gaussian backend scoring", "ldvec"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto *simulate = app.add_subcommand("simulate", "Sample models and a labelled dataset");
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--langs", sim.langs, "Language count L")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--rdim", sim.rdim, "I-vector dimension R")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--fdim", sim.fdim, "Feature dimension D")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--comps", sim.comps, "UBM component count Nc")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--segs-per-lang", sim.segs, "Segments per language")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--frames", sim.frames, "Frames per segment: T or A..B")->required();
  simulate->add_option("--sep", sim.sep, "Class separation in the W metric")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim.seed, "Random seed");

  StatsArgs st;
  auto *stats = app.add_subcommand("stats", "Compute sufficient statistics from features");
  stats->add_option("--features", st.features, "Directory holding features.manifest")->required();
  stats->add_option("--ubm", st.ubm, "UBM manifest")->required();
  stats->add_option("--tmatrix", st.tmatrix, "T-matrix manifest")->required();
  stats->add_option("--out", st.out, "Output stats manifest")->required();
  stats->add_option("--prune", st.prune, "Drop responsibilities below this and renormalize");

  TrainArgs tr;
  auto *train = app.add_subcommand("train", "Fit backend means and precision by EM");
  train->add_option("--stats", tr.stats, "Labelled stats manifest")->required();
  train->add_option("--tmatrix", tr.tmatrix, "T-matrix manifest")->required();
  train->add_option("--out", tr.out, "Output directory")->required();
  train->add_option("--iters", tr.iters, "Maximum EM iterations")->check(CLI::PositiveNumber);
  train->add_option("--tol", tr.tol, "Relative bound improvement to stop at")->check(CLI::PositiveNumber);
  train->add_option("--floor", tr.floor, "Eigenvalue floor on W^-1")->check(CLI::PositiveNumber);

  ExtractArgs ex;
  auto *extract = app.add_subcommand("extract", "Extract classical i-vectors with their counts");
  extract->add_option("--stats", ex.stats, "Stats manifest")->required();
  extract->add_option("--tmatrix", ex.tmatrix, "T-matrix manifest")->required();
  extract->add_option("--out", ex.out, "Output i-vectors manifest")->required();

  RecoverArgs rc;
  auto *recover = app.add_subcommand("recover", "Rebuild natural statistics from i-vectors");
  recover->add_option("--ivectors", rc.ivectors, "I-vectors manifest")->required();
  recover->add_option("--tmatrix", rc.tmatrix, "T-matrix manifest")->required();
  recover->add_option("--out", rc.out, "Output stats manifest")->required();

  ScoreArgs sc;
  auto *score = app.add_subcommand("score", "Score segments against every language");
  auto *score_stats = score->add_option("--stats", sc.stats, "Stats manifest");
  auto *score_ivecs = score->add_option("--ivectors", sc.ivectors, "I-vectors manifest");
  score_stats->excludes(score_ivecs);
  score_ivecs->excludes(score_stats);
  score->add_option("--backend", sc.backend, "Backend manifest")->required();
  score->add_option("--tmatrix", sc.tmatrix, "T-matrix manifest")->required();
  score->add_option("--scorer", sc.scorer, "ld, cpf or lgbe")
      ->required()
      ->check(CLI::IsMember({"ld", "cpf", "lgbe"}));
  score->add_option("--out", sc.out, "Output scores manifest")->required();

  EvalArgs ev;
  auto *eval = app.add_subcommand("eval", "Accuracy, confusion and log loss of a score matrix");
  eval->add_option("--scores", ev.scores, "Scores manifest")->required();
  eval->add_option("--out", ev.out, "Key/value report file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
    if (score->parsed() && sc.stats.empty() && sc.ivectors.empty())
      throw CLI::RequiredError("score needs one of --stats or --ivectors");
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "ldvec: " << e.what() << "\n";
    const CLI::App *sub = nullptr;
    for (const CLI::App *s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return RunSimulate(sim, err);
    if (stats->parsed()) return RunStats(st, err);
    if (train->parsed()) return RunTrain(tr, err);
    if (extract->parsed()) return RunExtract(ex, err);
    if (recover->parsed()) return RunRecover(rc, err);
    if (score->parsed()) return RunScore(sc, err);
    if (eval->parsed()) return RunEval(ev, out, err);
  } catch (const Error &e) {
    err << "ldvec: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception &e) {
    err << "ldvec: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ldvec
