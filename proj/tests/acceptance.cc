// tests/acceptance.cc

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "ldvec/cli.h"
#include "ldvec/evaluation.h"
#include "ldvec/scoring.h"
#include "ldvec/synth.h"
#include "ldvec/training.h"
#include "oracles.h"
#include "test-util.h"

using namespace ldvec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

VectorXd Differences(const VectorXd &scores) {
  return scores.tail(scores.size() - 1).array() - scores(0);
}

// 1
Outcome ZeroDuration() {
  Rng rng(101);
  const int dims[] = {1, 2, 4, 8};
  double max_ld = 0.0, max_cpf = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int r = dims[trial % 4];
    Backend b = RandomBackend(rng, 3, r, 2.0);
    VectorXd a = VectorXd::Zero(r);
    MatrixXd zero = MatrixXd::Zero(r, r);
    VectorXd ld = LdScore(a, zero, b);
    VectorXd cpf = CpfScore(a, zero, b);
    MatrixXd wi = b.precision * oracle::LuInverse(b.precision + MatrixXd::Identity(r, r));
    for (int l = 0; l < 3; ++l) {
      VectorXd m = b.means.row(l).transpose();
      max_ld = std::max(max_ld, std::abs(ld(l)));
      max_cpf = std::max(max_cpf, std::abs(cpf(l) + 0.5 * m.dot(wi * m)));
    }
  }
  return {max_ld <= 1e-12 && max_cpf <= 1e-10,
          "max|ld| = " + Fmt("%.3g", max_ld) + ", max cpf error = " + Fmt("%.3g", max_cpf)};
}

// 2
Outcome LgbeLimit() {
  Rng rng(202);
  const double ks[] = {1.0, 1e2, 1e4, 1e6};
  bool monotone = true;
  double worst_final = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 1 + trial % 4;
    TMatrix t = RandomTMatrix(rng, 3, r, 4);
    Backend b = RandomBackend(rng, 4, r, 1.0);
    SegmentStats s = RandomStats(rng, 4, r, 10.0);
    double prev_ld = std::numeric_limits<double>::infinity(), prev_cpf = prev_ld;
    for (double k : ks) {
      SegmentStats sk = s.Scaled(k);
      VectorXd lgbe = Differences(LgbeScore(ComputeClassicalIvector(sk, t), b));
      double gap_ld = oracle::MaxAbs(Differences(LdScore(sk, b, t)) - lgbe);
      double gap_cpf = oracle::MaxAbs(Differences(CpfScore(sk, b, t)) - lgbe);
      if (gap_ld >= prev_ld || gap_cpf >= prev_cpf) monotone = false;
      prev_ld = gap_ld;
      prev_cpf = gap_cpf;
    }
    worst_final = std::max({worst_final, prev_ld, prev_cpf});
  }
  return {monotone && worst_final <= 1e-3,
          "gap at k=1e6 = " + Fmt("%.3g", worst_final) +
              (monotone ? ", shrinking in k" : ", NOT monotone in k")};
}

// 3
Outcome LikelihoodRatio() {
  Rng rng(303);
  double worst = 0.0, worst_quad = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + trial % 4;
    Backend b = RandomBackend(rng, 3, r, 1.5);
    MatrixXd bb = RandomSpd(rng, r, 0.1, 20.0);
    std::normal_distribution<double> g(0.0, 2.0);
    VectorXd a(r);
    for (int j = 0; j < r; ++j) a(j) = g(rng);
    VectorXd ld = LdScore(a, bb, b);
    VectorXd exact(3);
    for (int l = 0; l < 3; ++l)
      exact(l) = oracle::ExactLogMarginal(a, bb, b.means.row(l).transpose(), b.precision);
    worst = std::max(worst, oracle::MaxAbs(Differences(ld) - Differences(exact)));
    if (r == 1) {
      VectorXd quad(3);
      for (int l = 0; l < 3; ++l)
        quad(l) = oracle::QuadratureLogMarginal1d(a(0), bb(0, 0), b.means(l, 0),
                                                  b.precision(0, 0));
      worst_quad = std::max(worst_quad, oracle::MaxAbs(Differences(ld) - Differences(quad)));
    }
  }
  return {worst <= 1e-8 && worst_quad <= 1e-6,
          "closed-form error = " + Fmt("%.3g", worst) + ", quadrature error = " +
              Fmt("%.3g", worst_quad)};
}

// 4
Outcome EmMonotoneStationary() {
  bool monotone = true;
  double worst_grad = 0.0;
  int max_iters = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SynthConfig cfg;
    cfg.dims = Dims{4, 2, 2, 3};
    cfg.segments_per_language = 30;
    cfg.frames_min = 20;
    cfg.frames_max = 100;
    cfg.class_separation = 2.0;
    cfg.seed = 4000 + seed;
    auto [models, data] = MakeDataset(cfg);
    TrainConfig tc;
    tc.max_iters = 5000;
    tc.rel_tol = 1e-15;
    auto [backend, report] = Train(data.stats, models.t, tc);
    max_iters = std::max(max_iters, report.iters_run);
    double prev = report.initial_bound;
    for (double bound : report.bounds) {
      if (bound < prev - 1e-8 * (1.0 + std::abs(prev))) monotone = false;
      prev = bound;
    }
    // With posteriors from the last E-step held fixed, the bound's gradient in
    // (m, W) equals the gradient of the log marginal at the final parameters.
    std::vector<PosteriorPair> post = EStep(data.stats, backend, models.t);
    auto f = [&](const Backend &b) { return TotalBound(data.stats, post, b, models.t); };
    const double h = 1e-5;
    for (int l = 0; l < 3; ++l)
      for (int j = 0; j < 2; ++j) {
        Backend p = backend, m = backend;
        p.means(l, j) += h;
        m.means(l, j) -= h;
        worst_grad = std::max(worst_grad, std::abs(f(p) - f(m)) / (2 * h));
      }
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        Backend p = backend, m = backend;
        p.precision(i, j) += h;
        m.precision(i, j) -= h;
        if (i != j) {
          p.precision(j, i) += h;
          m.precision(j, i) -= h;
        }
        worst_grad = std::max(worst_grad, std::abs(f(p) - f(m)) / (2 * h));
      }
  }
  return {monotone && worst_grad <= 1e-5,
          std::string(monotone ? "bound nondecreasing" : "bound DECREASED") +
              ", max |grad| = " + Fmt("%.3g", worst_grad) + ", max iterations " +
              std::to_string(max_iters)};
}

// 5
Outcome ParameterRecovery() {
  SynthConfig cfg;
  cfg.dims = Dims{4, 2, 2, 3};
  cfg.segments_per_language = 100;
  cfg.frames_min = cfg.frames_max = 1000;
  cfg.class_separation = 3.0;
  cfg.seed = 7;
  cfg.workers = 2;
  auto [models, data] = MakeDataset(cfg);
  TrainConfig tc;
  tc.max_iters = 20;
  tc.workers = 2;
  auto [backend, report] = Train(data.stats, models.t, tc);

  double worst = 0.0;
  for (int l = 0; l < 3; ++l) {
    VectorXd dev = (backend.means.row(l) - models.backend.means.row(l)).transpose();
    worst = std::max(worst, std::sqrt(dev.dot(models.backend.precision * dev)));
  }
  SynthConfig held = cfg;
  held.segments_per_language = 50;
  SynthDataset test = SampleDataset(models, held, 1000000);
  EvalReport ev = Evaluate(ScoreDataset(test.stats, backend, models.t, ScorerKind::kLd, 2));
  // Informational only: accuracy on a much larger held-out draw.
  held.segments_per_language = 1000;
  SynthDataset big = SampleDataset(models, held, 2000000);
  EvalReport ev_big = Evaluate(ScoreDataset(big.stats, backend, models.t, ScorerKind::kLd, 2));
  return {worst <= 0.15 && ev.accuracy >= 0.95,
          "max W-metric mean error = " + Fmt("%.4f", worst) + ", held-out ld accuracy = " +
              Fmt("%.4f", ev.accuracy) + " (" + std::to_string(report.iters_run) +
              " iterations; info: accuracy on 3000 further segments = " +
              Fmt("%.4f", ev_big.accuracy) + ")"};
}

// 6
Outcome PracticalScoring() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SynthConfig cfg;
    cfg.dims = Dims{3, 1 + static_cast<int>(seed % 4), 3, 3};
    cfg.segments_per_language = 5;
    cfg.frames_min = 0;
    cfg.frames_max = 200;
    cfg.seed = 6000 + seed;
    auto [models, data] = MakeDataset(cfg);
    IvectorSet iv = ExtractIvectors(data.stats, models.t);
    for (ScorerKind kind : {ScorerKind::kLd, ScorerKind::kCpf, ScorerKind::kLgbe}) {
      ScoreMatrix direct = ScoreDataset(data.stats, models.backend, models.t, kind);
      ScoreMatrix via = ScoreFromIvectors(iv, models.backend, models.t, kind);
      worst = std::max(worst, oracle::MaxAbs(direct.scores - via.scores));
    }
  }
  return {worst <= 1e-9, "max-abs difference = " + Fmt("%.3g", worst)};
}

// 7
Outcome ClassicalReduction() {
  Rng rng(707);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + trial % 5;
    TMatrix t = RandomTMatrix(rng, 3, r, 4);
    Backend b{MatrixXd::Zero(3, r), MatrixXd::Identity(r, r), {"a", "b", "c"}};
    SegmentStats s = RandomStats(rng, 4, r, 100.0);
    PosteriorPair pp = ComputePosterior(s, b, t);
    VectorXd iv = ComputeClassicalIvector(s, t).mean;
    for (int l = 0; l < 3; ++l) worst = std::max(worst, oracle::MaxAbs(pp.mean(l) - iv));
  }
  return {worst <= 1e-10, "max-abs difference = " + Fmt("%.3g", worst)};
}

// 8
std::map<std::string, std::vector<unsigned char>> Snapshot(const fs::path &dir) {
  std::map<std::string, std::vector<unsigned char>> files;
  for (const auto &e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file())
      files[fs::relative(e.path(), dir).generic_string()] = testutil::FileBytes(e.path());
  return files;
}

std::string Pipeline(const fs::path &dir) {
  auto run = [&](std::vector<std::string> args, std::string *out = nullptr) {
    std::ostringstream o, e;
    int code = RunCli(args, o, e);
    if (out) *out += o.str();
    if (code != 0) throw std::runtime_error("command failed: " + args[0] + ": " + e.str());
  };
  std::string stdout_text;
  auto p = [&](const char *name) { return (dir / name).string(); };
  run({"simulate", "--out", p("sim"), "--langs", "3", "--rdim", "2", "--fdim", "3", "--comps",
       "2", "--segs-per-lang", "10", "--frames", "20..60", "--sep", "2", "--seed", "11"});
  std::string t = p("sim/tmatrix.manifest");
  run({"stats", "--features", p("sim/features"), "--ubm", p("sim/ubm.manifest"), "--tmatrix", t,
       "--out", p("stats/stats.manifest")});
  run({"train", "--stats", p("stats/stats.manifest"), "--tmatrix", t, "--out", p("model")});
  run({"extract", "--stats", p("stats/stats.manifest"), "--tmatrix", t, "--out",
       p("iv/ivectors.manifest")});
  run({"recover", "--ivectors", p("iv/ivectors.manifest"), "--tmatrix", t, "--out",
       p("rec/stats.manifest")});
  for (const char *scorer : {"ld", "cpf", "lgbe"}) {
    std::string name = std::string("scores/") + scorer + ".manifest";
    run({"score", "--stats", p("stats/stats.manifest"), "--backend", p("model/backend.manifest"),
         "--tmatrix", t, "--scorer", scorer, "--out", p(name.c_str())});
    run({"eval", "--scores", p(name.c_str()), "--out",
         p((std::string("eval/") + scorer + ".txt").c_str())},
        &stdout_text);
  }
  run({"score", "--ivectors", p("iv/ivectors.manifest"), "--backend", p("model/backend.manifest"),
       "--tmatrix", t, "--scorer", "ld", "--out", p("scores/ld-iv.manifest")});
  return stdout_text;
}

Outcome DeterminismAndIo() {
  fs::path root = testutil::ScratchDir("acceptance-determinism");
  std::string out1 = Pipeline(root / "a");
  std::string out2 = Pipeline(root / "b");
  auto s1 = Snapshot(root / "a"), s2 = Snapshot(root / "b");
  bool same = s1 == s2 && out1 == out2;

  // Load and re-save every manifest; bytes must not change.
  int round_trips = 0, mismatches = 0;
  fs::path copy = root / "copy";
  fs::create_directories(copy);
  auto check = [&](const fs::path &src, const std::function<void(const fs::path &)> &resave,
                   const std::vector<std::string> &arrays) {
    fs::path dst = copy / src.filename();
    resave(dst);
    Manifest a = Manifest::Load(src), b = Manifest::Load(dst);
    bool ok = a.ArrayNames() == b.ArrayNames();
    for (const std::string &name : arrays)
      ok = ok && BitwiseEqual(a.GetArray(name), b.GetArray(name));
    ++round_trips;
    if (!ok) ++mismatches;
  };
  fs::path a = root / "a";
  check(a / "sim/ubm.manifest", [&](auto &d) { SaveUbm(LoadUbm(a / "sim/ubm.manifest"), d); },
        {"weights", "means", "cov_factors"});
  check(a / "sim/tmatrix.manifest",
        [&](auto &d) { SaveTMatrix(LoadTMatrix(a / "sim/tmatrix.manifest"), d); },
        {"blocks", "grams"});
  check(a / "model/backend.manifest",
        [&](auto &d) { SaveBackend(LoadBackend(a / "model/backend.manifest"), d); },
        {"means", "precision"});
  check(a / "stats/stats.manifest",
        [&](auto &d) { SaveStats(LoadStats(a / "stats/stats.manifest"), d); },
        {"n", "a", "labels"});
  check(a / "sim/features/features.manifest",
        [&](auto &d) { SaveFeatures(LoadFeatures(a / "sim/features/features.manifest"), d); },
        {"lengths", "labels", "frames"});
  check(a / "iv/ivectors.manifest",
        [&](auto &d) { SaveIvectors(LoadIvectors(a / "iv/ivectors.manifest"), d); },
        {"ivectors", "n", "labels"});
  check(a / "scores/cpf.manifest",
        [&](auto &d) { SaveScores(LoadScores(a / "scores/cpf.manifest"), d); },
        {"scores", "labels"});
  return {same && mismatches == 0,
          std::to_string(s1.size()) + " output files " +
              (same ? "byte-identical" : "DIFFER") + " across reruns, " +
              std::to_string(round_trips - mismatches) + "/" + std::to_string(round_trips) +
              " manifest round trips bitwise"};
}

struct Criterion {
  int id;
  const char *name;
  double limit_seconds;
  Outcome (*fn)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "zero-duration neutrality", 5, ZeroDuration},
      {2, "lgbe limit", 5, LgbeLimit},
      {3, "exact likelihood-ratio oracle", 30, LikelihoodRatio},
      {4, "EM monotonicity and stationarity", 120, EmMonotoneStationary},
      {5, "parameter recovery", 120, ParameterRecovery},
      {6, "practical-scoring identity", 10, PracticalScoring},
      {7, "classical-posterior reduction", 5, ClassicalReduction},
      {8, "determinism and I/O", 30, DeterminismAndIo},
  };
  int failures = 0;
  for (const Criterion &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs <= c.limit_seconds;
    bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s [%d] %s: %s; %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : " OVER TIME");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
