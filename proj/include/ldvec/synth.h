// ldvec/synth.h

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

#ifndef LDVEC_SYNTH_H_
#define LDVEC_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <utility>

#include "ldvec/stats.h"

namespace ldvec {

// Sampler for the generative model:
//
//   x_s     ~ N(m_l, W^{-1})                 one per segment of language l
//   i_t     ~ Categorical(weights)           one per frame
//   frame_t =  mean_i + L_i (T_i x_s + eps),  eps ~ N(0, I)
//
// where L_i is the UBM covariance factor, so whiten_i(frame_t) = T_i x + eps.

using Rng = std::mt19937_64;

/// Independent stream for (seed, index). Segment k of a dataset uses stream
/// k + 1 and the models use stream 0, so generation order does not matter.
Rng StreamRng(std::uint64_t seed, std::uint64_t index);

struct SynthConfig {
  Dims dims;
  int frames_min = 100;  // T_s drawn uniformly from [frames_min, frames_max]
  int frames_max = 100;
  int segments_per_language = 10;
  double class_separation = 1.0;
  std::uint64_t seed = 0;
  /// Nc = 1, D = R, T = I and a standard-normal UBM component.
  bool identity_t = false;
  /// Multiplies the sampled W.
  double precision_scale = 1.0;
  int workers = 1;

  void Validate() const;
};

struct SynthModels {
  Ubm ubm;
  TMatrix t;
  Backend backend;
};

struct SynthDataset {
  FeatureSet features;
  StatsDataset stats;
  MatrixXd true_ivectors;  // S x R, the sampled x_s
};

/// Random UBM (covariance eigenvalues in [0.5, 2]), T with N(0, 1/D)
/// entries, W with eigenvalues in [1, 10] (times precision_scale), and
/// m_l = separation * L_W^{-T} z so separation is measured in the W metric.
SynthModels SampleModel(const SynthConfig &cfg);

/// Frames of one segment plus its latent i-vector.
std::pair<MatrixXd, VectorXd> SampleSegment(const SynthModels &models, int lang,
                                            int num_frames, Rng &rng);

/// segments_per_language segments per language, in language-major order.
/// `stream_offset` shifts the per-segment streams to draw a disjoint set
/// (e.g. held-out data) from the same models.
SynthDataset SampleDataset(const SynthModels &models, const SynthConfig &cfg,
                           std::uint64_t stream_offset = 0);

std::pair<SynthModels, SynthDataset> MakeDataset(const SynthConfig &cfg);

// Direct samplers for unit tests that do not need real frames.
MatrixXd RandomSpd(Rng &rng, int dim, double min_eig, double max_eig);
MatrixXd RandomOrthogonal(Rng &rng, int dim);
TMatrix RandomTMatrix(Rng &rng, int feat_dim, int ivector_dim, int num_components);
Backend RandomBackend(Rng &rng, int num_languages, int ivector_dim, double spread = 1.0);
/// n_i ~ U[0, max_count], a ~ N(0, max_count I).
SegmentStats RandomStats(Rng &rng, int num_components, int ivector_dim, double max_count);

/// Manifest kind=truth: arrays means (L x R), precision (R x R),
/// ivectors (S x R), labels (S).
void SaveTruth(const Backend &backend, const MatrixXd &ivectors,
               const std::vector<std::optional<int>> &labels,
               const std::filesystem::path &manifest, const std::string &subdir = "");

}  // namespace ldvec

#endif  // LDVEC_SYNTH_H_
