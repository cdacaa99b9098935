// ldvec/training.h

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

#ifndef LDVEC_TRAINING_H_
#define LDVEC_TRAINING_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "ldvec/posterior.h"

namespace ldvec {

struct TrainConfig {
  int max_iters = 20;
  double rel_tol = 1e-6;
  /// Eigenvalue floor applied to W^{-1} before it is inverted.
  double min_eig_floor = 1e-8;
  /// Unused by the deterministic EM; kept so stochastic variants share the
  /// config.
  std::uint64_t seed = 0;
  int workers = 1;

  void Validate() const;
};

struct TrainReport {
  /// Total bound at the initial parameters (before any update).
  double initial_bound = 0.0;
  /// Total bound after each completed iteration.
  std::vector<double> bounds;
  int iters_run = 0;
  bool converged = false;
  /// False if any iteration lowered the bound by more than
  /// 1e-8 * (1 + |bound|).
  bool monotone = true;
};

/// Training labels, one per segment; throws kMissingLabel for unlabeled
/// segments.
std::vector<int> RequireLabels(const StatsDataset &dataset);

/// Posterior of every segment under the current backend.
std::vector<PosteriorPair> EStep(const StatsDataset &dataset, const Backend &backend,
                                 const TMatrix &t, int workers = 1);

/// Row l = mean over segments of language l of their language-l posterior
/// mean. Throws kEmptyClass when a language has no segments.
MatrixXd MStepMeans(const std::vector<PosteriorPair> &posteriors,
                    const std::vector<int> &labels, int num_languages);

/// Returns W from
///
///   W^{-1} = 1/S sum_s C_s + 1/S sum_l sum_{s in l} (mu_ls - m_l)(mu_ls - m_l)'
///
/// after symmetrizing and flooring the eigenvalues of W^{-1} at `floor`.
MatrixXd MStepPrecision(const std::vector<PosteriorPair> &posteriors,
                        const std::vector<int> &labels, const MatrixXd &class_means,
                        double floor = 1e-8);

/// Mean-field lower bound on log p(data | l) for one segment, dropping only
/// terms that depend on the data alone:
///
///   1/2 log|W| - 1/2 tr[W (C + (mu - m)(mu - m)')]      E log prior
///   + 1/2 log|C| + R/2                                  entropy
///   + a'mu - 1/2 tr[B (C + mu mu')]                     E log likelihood
///
/// With Q the exact posterior this equals the log marginal of the
/// linearized model, log int N(x | m, W^{-1}) exp(a'x - x'Bx/2) dx.
double LowerBound(const SegmentStats &stats, const PosteriorPair &pp, int lang,
                  const Backend &backend, const TMatrix &t);
double LowerBound(const VectorXd &a, const MatrixXd &b, const PosteriorPair &pp, int lang,
                  const Backend &backend);

/// Sum of LowerBound over segments at their labelled language.
double TotalBound(const StatsDataset &dataset, const std::vector<PosteriorPair> &posteriors,
                  const Backend &backend, const TMatrix &t);

/// Initial backend: class means of classical i-vectors, W = I.
Backend InitialBackend(const StatsDataset &dataset, const TMatrix &t);

/// Alternates E and M steps from InitialBackend until the relative bound
/// gain drops below cfg.rel_tol or cfg.max_iters is reached.
std::pair<Backend, TrainReport> Train(const StatsDataset &dataset, const TMatrix &t,
                                      const TrainConfig &cfg);

/// One E step followed by both M steps.
Backend EmIteration(const StatsDataset &dataset, const Backend &backend, const TMatrix &t,
                    const TrainConfig &cfg);

}  // namespace ldvec

#endif  // LDVEC_TRAINING_H_
