// tests/test-scoring.cc

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

#include <doctest.h>

#include "ldvec/scoring.h"
#include "ldvec/synth.h"
#include "ldvec/training.h"
#include "oracles.h"
#include "test-util.h"

using namespace ldvec;
using testutil::CodeOf;

namespace {

Backend Scalar() {
  return Backend{MatrixXd::Constant(1, 1, 1.0), MatrixXd::Constant(1, 1, 1.0), {"x"}};
}

double Spread(const VectorXd &v) { return v.maxCoeff() - v.minCoeff(); }

}  // namespace

TEST_CASE("scalar scores: ld = 0.125, cpf = 0, lgbe = 0") {
  VectorXd a = VectorXd::Constant(1, 2.0);
  MatrixXd b = MatrixXd::Constant(1, 1, 3.0);
  CHECK(std::abs(LdScore(a, b, Scalar())(0) - 0.125) <= 1e-15);
  CHECK(std::abs(CpfScore(a, b, Scalar())(0)) <= 1e-15);
  ClassicalIvector iv{VectorXd::Constant(1, 0.5)};
  CHECK(std::abs(LgbeScore(iv, Scalar())(0)) <= 1e-15);
}

TEST_CASE("no acoustic evidence gives equal ld scores") {
  Rng rng(1);
  Backend b = RandomBackend(rng, 4, 3, 2.0);
  TMatrix zero({MatrixXd::Zero(2, 3), MatrixXd::Zero(2, 3)});
  SegmentStats s{VectorXd::Constant(2, 50.0), VectorXd::Zero(3), std::nullopt};
  VectorXd ld = LdScore(s, b, zero);
  CHECK(oracle::MaxAbs(ld) <= 1e-12);
}

TEST_CASE("ld score differences are exact log-likelihood ratios") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    Backend b = RandomBackend(rng, 3, 4, 1.5);
    VectorXd a = VectorXd::Random(4) * 4.0;
    MatrixXd bb = RandomSpd(rng, 4, 0.1, 30.0);
    VectorXd ld = LdScore(a, bb, b);
    VectorXd exact(3);
    for (int l = 0; l < 3; ++l)
      exact(l) = oracle::ExactLogMarginal(a, bb, b.means.row(l).transpose(), b.precision);
    for (int l = 1; l < 3; ++l)
      CHECK(std::abs((ld(l) - ld(0)) - (exact(l) - exact(0))) <= 1e-10 * (1.0 + Spread(exact)));
  }
}

TEST_CASE("ld score differences equal lower-bound differences") {
  Rng rng(3);
  TMatrix t = RandomTMatrix(rng, 3, 3, 4);
  Backend b = RandomBackend(rng, 3, 3);
  SegmentStats s = RandomStats(rng, 4, 3, 20.0);
  PosteriorPair pp = ComputePosterior(s, b, t);
  VectorXd ld = LdScore(s, b, t);
  for (int l = 1; l < 3; ++l) {
    double db = LowerBound(s, pp, l, b, t) - LowerBound(s, pp, 0, b, t);
    CHECK(std::abs((ld(l) - ld(0)) - db) <= 1e-10 * (1.0 + std::abs(db)));
  }
}

TEST_CASE("cpf equals ld evaluated with I + B in place of B") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    Backend b = RandomBackend(rng, 3, 3);
    VectorXd a = VectorXd::Random(3);
    MatrixXd bb = RandomSpd(rng, 3, 0.1, 10.0);
    VectorXd cpf = CpfScore(a, bb, b);
    VectorXd ld = LdScore(a, MatrixXd::Identity(3, 3) + bb, b);
    CHECK(oracle::MaxAbs(cpf - ld) <= 1e-12 * (1.0 + oracle::MaxAbs(ld)));
  }
}

TEST_CASE("lgbe matches the Gaussian log-likelihood up to a shared constant") {
  Rng rng(5);
  Backend b = RandomBackend(rng, 3, 2);
  ClassicalIvector iv{VectorXd::Random(2)};
  VectorXd lgbe = LgbeScore(iv, b);
  MatrixXd cov = oracle::LuInverse(b.precision);
  for (int l = 1; l < 3; ++l) {
    double ll = std::log(oracle::GaussianDensity(iv.mean, b.means.row(l).transpose(), cov)) -
                std::log(oracle::GaussianDensity(iv.mean, b.means.row(0).transpose(), cov));
    CHECK(std::abs((lgbe(l) - lgbe(0)) - ll) <= 1e-10);
  }
}

TEST_CASE("permuting backend languages permutes score columns") {
  Rng rng(6);
  Backend b = RandomBackend(rng, 3, 3);
  Backend p = b;
  const int perm[3] = {2, 0, 1};
  for (int l = 0; l < 3; ++l) {
    p.means.row(l) = b.means.row(perm[l]);
    p.labels[l] = b.labels[perm[l]];
  }
  VectorXd a = VectorXd::Random(3);
  MatrixXd bb = RandomSpd(rng, 3, 0.5, 4.0);
  ClassicalIvector iv{VectorXd::Random(3)};
  VectorXd ld = LdScore(a, bb, b), ldp = LdScore(a, bb, p);
  VectorXd cpf = CpfScore(a, bb, b), cpfp = CpfScore(a, bb, p);
  VectorXd lg = LgbeScore(iv, b), lgp = LgbeScore(iv, p);
  for (int l = 0; l < 3; ++l) {
    CHECK(ldp(l) == ld(perm[l]));
    CHECK(cpfp(l) == cpf(perm[l]));
    CHECK(lgp(l) == lg(perm[l]));
  }
}

TEST_CASE("scoring from saved i-vectors agrees with scoring from stats") {
  SynthConfig cfg;
  cfg.dims = Dims{3, 2, 3, 2};
  cfg.segments_per_language = 5;
  cfg.frames_min = 10;
  cfg.frames_max = 30;
  cfg.seed = 7;
  auto [models, data] = MakeDataset(cfg);
  for (ScorerKind kind : {ScorerKind::kLd, ScorerKind::kCpf, ScorerKind::kLgbe}) {
    ScoreMatrix direct = ScoreDataset(data.stats, models.backend, models.t, kind);
    ScoreMatrix via = ScoreFromIvectors(ExtractIvectors(data.stats, models.t), models.backend,
                                        models.t, kind);
    CHECK(oracle::MaxAbs(direct.scores - via.scores) <=
          1e-9 * (1.0 + oracle::MaxAbs(direct.scores)));
    CHECK(via.labels == direct.labels);
  }
}

TEST_CASE("parallel scoring is bitwise identical and scores round trip") {
  SynthConfig cfg;
  cfg.dims = Dims{3, 2, 3, 3};
  cfg.segments_per_language = 6;
  cfg.seed = 8;
  auto [models, data] = MakeDataset(cfg);
  ScoreMatrix one = ScoreDataset(data.stats, models.backend, models.t, ScorerKind::kLd, 1);
  ScoreMatrix many = ScoreDataset(data.stats, models.backend, models.t, ScorerKind::kLd, 3);
  CHECK(one.scores == many.scores);
  auto dir = testutil::ScratchDir("scores");
  SaveScores(one, dir / "scores.manifest");
  ScoreMatrix back = LoadScores(dir / "scores.manifest");
  CHECK(back.scores == one.scores);
  CHECK(back.kind == ScorerKind::kLd);
  CHECK(back.labels == one.labels);
  CHECK(back.languages == one.languages);
}

TEST_CASE("scorer names parse and unknown names are rejected") {
  CHECK(ParseScorer("ld") == ScorerKind::kLd);
  CHECK(ParseScorer("cpf") == ScorerKind::kCpf);
  CHECK(ParseScorer("lgbe") == ScorerKind::kLgbe);
  CHECK(ScorerName(ScorerKind::kCpf) == "cpf");
  CHECK(CodeOf([] { ParseScorer("plda"); }) == ErrorCode::kInvalidArgument);
}
