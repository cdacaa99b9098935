// tests/test-synth.cc

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

#include <limits>

#include <doctest.h>

#include "ldvec/synth.h"
#include "ldvec/training.h"
#include "oracles.h"
#include "test-util.h"

using namespace ldvec;
using testutil::CodeOf;

namespace {

SynthConfig BaseConfig(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.dims = Dims{3, 2, 3, 3};
  cfg.segments_per_language = 8;
  cfg.frames_min = 5;
  cfg.frames_max = 25;
  cfg.seed = seed;
  return cfg;
}

bool SameFeatures(const FeatureSet &x, const FeatureSet &y) {
  if (x.size() != y.size() || x.labels != y.labels) return false;
  for (std::size_t s = 0; s < x.size(); ++s)
    if (!BitwiseEqual(ToArray(x.segments[s]), ToArray(y.segments[s]))) return false;
  return true;
}

}  // namespace

TEST_CASE("same seed reproduces models and data bitwise, across worker counts") {
  SynthConfig cfg = BaseConfig(1);
  auto [m1, d1] = MakeDataset(cfg);
  cfg.workers = 4;
  auto [m2, d2] = MakeDataset(cfg);
  CHECK(SameFeatures(d1.features, d2.features));
  CHECK(BitwiseEqual(ToArray(m1.backend.precision), ToArray(m2.backend.precision)));
  CHECK(BitwiseEqual(ToArray(d1.true_ivectors), ToArray(d2.true_ivectors)));
  cfg.seed = 2;
  auto [m3, d3] = MakeDataset(cfg);
  CHECK_FALSE(SameFeatures(d1.features, d3.features));
}

TEST_CASE("sampled models are valid and have the requested shapes") {
  SynthModels m = SampleModel(BaseConfig(3));
  CHECK(m.ubm.num_components() == 3);
  CHECK(m.ubm.feat_dim() == 3);
  CHECK(m.t.ivector_dim() == 2);
  CHECK(m.backend.num_languages() == 3);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m.backend.precision);
  CHECK(eig.eigenvalues().minCoeff() >= 1.0 - 1e-12);
  CHECK(eig.eigenvalues().maxCoeff() <= 10.0 + 1e-12);
}

TEST_CASE("class separation sets the W-norm of the language means") {
  SynthConfig cfg = BaseConfig(4);
  cfg.class_separation = 0.0;
  CHECK(SampleModel(cfg).backend.means.isZero(0.0));
  cfg.class_separation = 1.0;
  SynthModels one = SampleModel(cfg);
  cfg.class_separation = 3.0;
  SynthModels three = SampleModel(cfg);
  CHECK(oracle::MaxAbs(three.backend.means - 3.0 * one.backend.means) <= 1e-12);
}

TEST_CASE("zero frames give empty statistics") {
  SynthConfig cfg = BaseConfig(5);
  cfg.frames_min = cfg.frames_max = 0;
  auto [models, data] = MakeDataset(cfg);
  for (const SegmentStats &s : data.stats.segments) {
    CHECK(s.n.isZero(0.0));
    CHECK(s.a.isZero(0.0));
  }
}

TEST_CASE("true i-vectors follow the backend prior") {
  SynthConfig cfg = BaseConfig(6);
  cfg.dims.num_languages = 1;
  cfg.segments_per_language = 4000;
  cfg.frames_min = cfg.frames_max = 1;
  cfg.workers = 4;
  auto [models, data] = MakeDataset(cfg);
  const MatrixXd &x = data.true_ivectors;
  VectorXd mean = x.colwise().mean().transpose();
  MatrixXd centred = x.rowwise() - mean.transpose();
  MatrixXd cov = centred.transpose() * centred / (x.rows() - 1.0);
  VectorXd dev = mean - models.backend.means.row(0).transpose();
  // W-metric error of the sample mean is sqrt(chi2_R / S); 0.1 is ~6 sigma for S = 4000.
  CHECK(std::sqrt(dev.dot(models.backend.precision * dev)) <= 0.1);
  MatrixXd whitened = models.backend.precision.llt().matrixU() * cov *
                      MatrixXd(models.backend.precision.llt().matrixL());
  CHECK(oracle::MaxAbs(whitened - MatrixXd::Identity(2, 2)) <= 0.1);
}

TEST_CASE("very large precision pins every i-vector to its class mean") {
  SynthConfig cfg = BaseConfig(7);
  cfg.precision_scale = 1e8;
  auto [models, data] = MakeDataset(cfg);
  for (std::size_t s = 0; s < data.stats.size(); ++s) {
    int l = *data.stats.segments[s].label;
    CHECK((data.true_ivectors.row(s) - models.backend.means.row(l)).norm() <= 1e-3);
  }
}

TEST_CASE("with zero separation and huge precision, frame means sit at the UBM mean") {
  SynthConfig cfg;
  cfg.dims = Dims{4, 2, 3, 1};
  cfg.class_separation = 0.0;
  cfg.precision_scale = 1e6;
  cfg.seed = 13;
  SynthModels models = SampleModel(cfg);
  Rng rng(14);
  const int n = 10000;
  auto [frames, x] = SampleSegment(models, 0, n, rng);
  const Ubm &u = models.ubm;
  VectorXd centre = u.means.transpose() * u.weights;
  MatrixXd cov = -centre * centre.transpose();
  for (int i = 0; i < u.num_components(); ++i) {
    VectorXd mu = u.means.row(i).transpose();
    MatrixXd l = u.cov_factors[i];
    cov += u.weights(i) * (l * l.transpose() + mu * mu.transpose());
  }
  VectorXd mean = frames.colwise().mean().transpose();
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(mean(j) - centre(j)) <= 3.0 * std::sqrt(cov(j, j) / n));
}

TEST_CASE("long segments give classical i-vectors that cluster by language") {
  SynthConfig cfg;
  cfg.dims = Dims{4, 2, 2, 3};
  cfg.segments_per_language = 20;
  cfg.frames_min = cfg.frames_max = 2000;
  cfg.class_separation = 3.0;
  cfg.seed = 7;
  auto [models, data] = MakeDataset(cfg);
  IvectorSet iv = ExtractIvectors(data.stats, models.t);
  const Eigen::Index s = iv.ivectors.rows();
  double total = 0.0;
  for (Eigen::Index k = 0; k < s; ++k) {
    std::vector<double> sum(3, 0.0), count(3, 0.0);
    for (Eigen::Index j = 0; j < s; ++j) {
      if (j == k) continue;
      sum[*iv.labels[j]] += (iv.ivectors.row(k) - iv.ivectors.row(j)).norm();
      count[*iv.labels[j]] += 1.0;
    }
    const int own = *iv.labels[k];
    double a = sum[own] / count[own], b = std::numeric_limits<double>::infinity();
    for (int l = 0; l < 3; ++l)
      if (l != own) b = std::min(b, sum[l] / count[l]);
    total += (b - a) / std::max(a, b);
  }
  CHECK(total / s > 0.0);
}

TEST_CASE("identity configuration: classical i-vectors approach x as segments grow") {
  auto average_error = [](int frames) {
    SynthConfig cfg;
    cfg.dims = Dims{2, 2, 1, 1};
    cfg.identity_t = true;
    cfg.segments_per_language = 100;
    cfg.frames_min = cfg.frames_max = frames;
    cfg.seed = 15;
    auto [models, data] = MakeDataset(cfg);
    double total = 0.0;
    for (std::size_t s = 0; s < data.stats.size(); ++s)
      total += (ComputeClassicalIvector(data.stats.segments[s], models.t).mean -
                data.true_ivectors.row(s).transpose())
                   .norm();
    return total / static_cast<double>(data.stats.size());
  };
  double short_err = average_error(10), long_err = average_error(10000);
  CHECK(long_err < short_err);
  CHECK(long_err <= 0.05);
}

TEST_CASE("training recovers the class means up to sampling noise") {
  SynthConfig cfg = BaseConfig(9);
  cfg.class_separation = 4.0;
  cfg.segments_per_language = 40;
  cfg.frames_min = cfg.frames_max = 200;
  auto [models, data] = MakeDataset(cfg);
  auto [backend, report] = Train(data.stats, models.t, TrainConfig{});
  CHECK(report.converged);
  for (int l = 0; l < 3; ++l) {
    // Compare against the mean of the sampled x, which removes between-segment noise.
    VectorXd target = VectorXd::Zero(2);
    for (int s = 0; s < 40; ++s) target += data.true_ivectors.row(l * 40 + s).transpose() / 40.0;
    VectorXd dev = backend.means.row(l).transpose() - target;
    CHECK(std::sqrt(dev.dot(models.backend.precision * dev)) <= 0.15);
  }
}

TEST_CASE("truth manifest carries the sampled i-vectors") {
  auto dir = testutil::ScratchDir("synth-truth");
  auto [models, data] = MakeDataset(BaseConfig(10));
  SaveTruth(models.backend, data.true_ivectors, data.features.labels, dir / "truth.manifest");
  Manifest m = Manifest::Load(dir / "truth.manifest");
  m.ExpectKind("truth");
  CHECK(ToMatrix(m.GetArray("ivectors")) == data.true_ivectors);
  CHECK(m.Labels() == models.backend.labels);
}
