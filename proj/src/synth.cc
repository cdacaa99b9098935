// ldvec/synth.cc

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

#include "ldvec/synth.h"

#include <cmath>
#include <limits>

namespace ldvec {

namespace {

MatrixXd Gaussian(Rng &rng, Eigen::Index rows, Eigen::Index cols, double stddev = 1.0) {
  std::normal_distribution<double> normal(0.0, stddev);
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  return m;
}

VectorXd GaussianVector(Rng &rng, Eigen::Index n, double stddev = 1.0) {
  return Gaussian(rng, n, 1, stddev).col(0);
}

constexpr double kUbmMeanSpread = 10.0;
constexpr double kUbmMinDistance = 20.0;

/// Component means at least kUbmMinDistance apart, so frames are rarely
/// aligned to the wrong component.
MatrixXd SpreadMeans(Rng &rng, int nc, int d) {
  double spread = kUbmMeanSpread;
  for (int attempt = 1;; ++attempt) {
    MatrixXd means = Gaussian(rng, nc, d, spread);
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nc; ++i)
      for (int j = i + 1; j < nc; ++j)
        min_dist = std::min(min_dist, (means.row(i) - means.row(j)).norm());
    if (min_dist >= kUbmMinDistance) return means;
    if (attempt % 50 == 0) spread *= 1.25;
  }
}

}  // namespace

Rng StreamRng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

void SynthConfig::Validate() const {
  dims.Validate();
  Require(frames_min >= 0 && frames_max >= frames_min, ErrorCode::kInvalidArgument,
          "frame range must satisfy 0 <= min <= max");
  Require(segments_per_language >= 1, ErrorCode::kInvalidArgument,
          "segments per language must be >= 1");
  Require(class_separation >= 0.0 && std::isfinite(class_separation),
          ErrorCode::kInvalidArgument, "class separation must be >= 0");
  Require(precision_scale > 0.0, ErrorCode::kInvalidArgument, "precision scale must be > 0");
  if (identity_t)
    Require(dims.num_components == 1 && dims.feat_dim == dims.ivector_dim,
            ErrorCode::kInvalidArgument, "identity T needs Nc = 1 and D = R");
}

MatrixXd RandomOrthogonal(Rng &rng, int dim) {
  Eigen::HouseholderQR<MatrixXd> qr(Gaussian(rng, dim, dim));
  MatrixXd q = qr.householderQ();
  // Sign fix makes the draw Haar-distributed.
  VectorXd signs = qr.matrixQR().diagonal().array().sign();
  for (int k = 0; k < dim; ++k)
    if (signs(k) < 0) q.col(k) *= -1.0;
  return q;
}

MatrixXd RandomSpd(Rng &rng, int dim, double min_eig, double max_eig) {
  std::uniform_real_distribution<double> uniform(min_eig, max_eig);
  MatrixXd q = RandomOrthogonal(rng, dim);
  VectorXd eig(dim);
  for (int k = 0; k < dim; ++k) eig(k) = uniform(rng);
  return Symmetrize(q * eig.asDiagonal() * q.transpose());
}

TMatrix RandomTMatrix(Rng &rng, int feat_dim, int ivector_dim, int num_components) {
  std::vector<MatrixXd> blocks;
  for (int i = 0; i < num_components; ++i)
    blocks.push_back(Gaussian(rng, feat_dim, ivector_dim, 1.0 / std::sqrt(feat_dim)));
  return TMatrix(std::move(blocks));
}

Backend RandomBackend(Rng &rng, int num_languages, int ivector_dim, double spread) {
  Backend b;
  b.means = Gaussian(rng, num_languages, ivector_dim, spread);
  b.precision = RandomSpd(rng, ivector_dim, 0.5, 2.0);
  b.labels = DefaultLanguageLabels(num_languages);
  return b;
}

SegmentStats RandomStats(Rng &rng, int num_components, int ivector_dim, double max_count) {
  std::uniform_real_distribution<double> uniform(0.0, max_count);
  SegmentStats s;
  s.n.resize(num_components);
  for (int i = 0; i < num_components; ++i) s.n(i) = uniform(rng);
  s.a = GaussianVector(rng, ivector_dim, std::sqrt(max_count));
  return s;
}

SynthModels SampleModel(const SynthConfig &cfg) {
  cfg.Validate();
  Rng rng = StreamRng(cfg.seed, 0);
  const int d = cfg.dims.feat_dim, r = cfg.dims.ivector_dim, nc = cfg.dims.num_components,
            l = cfg.dims.num_languages;
  SynthModels models;

  if (cfg.identity_t) {
    models.ubm.weights = VectorXd::Ones(1);
    models.ubm.means = MatrixXd::Zero(1, d);
    models.ubm.cov_factors = {MatrixXd::Identity(d, d)};
    models.t = TMatrix({MatrixXd::Identity(d, r)});
  } else {
    std::uniform_real_distribution<double> weight(1.0, 2.0);
    models.ubm.weights.resize(nc);
    for (int i = 0; i < nc; ++i) models.ubm.weights(i) = weight(rng);
    models.ubm.weights /= models.ubm.weights.sum();
    models.ubm.means = SpreadMeans(rng, nc, d);
    for (int i = 0; i < nc; ++i) {
      MatrixXd cov = RandomSpd(rng, d, 0.5, 2.0);
      models.ubm.cov_factors.push_back(Eigen::LLT<MatrixXd>(cov).matrixL());
    }
    models.t = RandomTMatrix(rng, d, r, nc);
  }

  MatrixXd w = RandomSpd(rng, r, 1.0, 10.0);
  // m_l = separation * L^{-T} z with W = L L', so (m_l' W m_l)^{1/2} = separation |z|.
  Eigen::LLT<MatrixXd> llt(w);
  MatrixXd z = Gaussian(rng, r, l);
  MatrixXd means = llt.matrixU().solve(z) * cfg.class_separation;
  models.backend.means = means.transpose();
  models.backend.precision = Symmetrize(cfg.precision_scale * w);
  models.backend.labels = DefaultLanguageLabels(l);

  models.ubm.Validate();
  models.t.Validate();
  models.backend.Validate();
  return models;
}

std::pair<MatrixXd, VectorXd> SampleSegment(const SynthModels &models, int lang,
                                            int num_frames, Rng &rng) {
  Require(num_frames >= 0, ErrorCode::kInvalidArgument, "frame count must be >= 0");
  Require(lang >= 0 && lang < models.backend.num_languages(), ErrorCode::kLabelOutOfRange,
          "language index out of range");
  const int r = models.backend.ivector_dim(), d = models.ubm.feat_dim();
  Eigen::LLT<MatrixXd> llt = Cholesky(models.backend.precision, "W");
  VectorXd x = models.backend.means.row(lang).transpose() +
               llt.matrixU().solve(GaussianVector(rng, r));

  const VectorXd &w = models.ubm.weights;
  std::discrete_distribution<int> component(w.data(), w.data() + w.size());
  MatrixXd frames(num_frames, d);
  for (int f = 0; f < num_frames; ++f) {
    int i = component(rng);
    VectorXd white = models.t.blocks[i] * x + GaussianVector(rng, d);
    frames.row(f) = (models.ubm.means.row(i).transpose() +
                     models.ubm.cov_factors[i].triangularView<Eigen::Lower>() * white)
                        .transpose();
  }
  return {frames, x};
}

SynthDataset SampleDataset(const SynthModels &models, const SynthConfig &cfg,
                           std::uint64_t stream_offset) {
  cfg.Validate();
  const int l = models.backend.num_languages(), per = cfg.segments_per_language;
  const std::size_t s = static_cast<std::size_t>(l) * per;
  SynthDataset out;
  out.features.feat_dim = models.ubm.feat_dim();
  out.features.languages = models.backend.labels;
  out.features.segments.resize(s);
  out.features.labels.resize(s);
  out.true_ivectors.resize(static_cast<Eigen::Index>(s), models.backend.ivector_dim());
  ParallelFor(s, cfg.workers, [&](std::size_t k) {
    Rng rng = StreamRng(cfg.seed, 1 + stream_offset + k);
    std::uniform_int_distribution<int> length(cfg.frames_min, cfg.frames_max);
    int lang = static_cast<int>(k) / per;
    auto [frames, x] = SampleSegment(models, lang, length(rng), rng);
    out.features.segments[k] = std::move(frames);
    out.features.labels[k] = lang;
    out.true_ivectors.row(k) = x.transpose();
  });
  out.stats = ComputeDatasetStats(out.features, models.ubm, models.t, 0.0, cfg.workers);
  return out;
}

std::pair<SynthModels, SynthDataset> MakeDataset(const SynthConfig &cfg) {
  SynthModels models = SampleModel(cfg);
  SynthDataset data = SampleDataset(models, cfg);
  return {std::move(models), std::move(data)};
}

void SaveTruth(const Backend &backend, const MatrixXd &ivectors,
               const std::vector<std::optional<int>> &labels,
               const std::filesystem::path &path, const std::string &subdir) {
  Require(ivectors.rows() >= 1 && static_cast<std::size_t>(ivectors.rows()) == labels.size(),
          ErrorCode::kShapeMismatch, "one label per true i-vector required");
  Manifest m("truth");
  m.SetInt("R", backend.ivector_dim());
  m.SetInt("L", backend.num_languages());
  m.SetInt("S", ivectors.rows());
  m.SetLabels(backend.labels);
  m.PutArray(path, "means", ToArray(backend.means), subdir);
  m.PutArray(path, "precision", ToArray(backend.precision), subdir);
  m.PutArray(path, "ivectors", ToArray(ivectors), subdir);
  m.PutArray(path, "labels", EncodeLabels(labels, backend.num_languages()), subdir);
  m.Save(path);
}

}  // namespace ldvec
