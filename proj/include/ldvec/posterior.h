// ldvec/posterior.h

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

#ifndef LDVEC_POSTERIOR_H_
#define LDVEC_POSTERIOR_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ldvec/model.h"
#include "ldvec/stats.h"

namespace ldvec {

/// Language-dependent i-vector posteriors of one segment. The prior of
/// language l is N(m_l, W^{-1}); combined with the segment's natural
/// parameters (a, B) the posterior is N(mu_l, C) with
///
///   C    = (W + B)^{-1}          shared by all languages
///   mu_l = C (W m_l + a)
struct PosteriorPair {
  MatrixXd cov;    // R x R
  MatrixXd means;  // L x R, row l is mu_l

  int num_languages() const { return static_cast<int>(means.rows()); }
  VectorXd mean(int lang) const { return means.row(lang).transpose(); }
};

/// Point estimate under the standard-normal prior: (I + B)^{-1} a.
struct ClassicalIvector {
  VectorXd mean;
};

PosteriorPair ComputePosterior(const SegmentStats &stats, const Backend &backend,
                               const TMatrix &t);
/// Same, from the natural parameters directly.
PosteriorPair ComputePosterior(const VectorXd &a, const MatrixXd &b, const Backend &backend);

ClassicalIvector ComputeClassicalIvector(const SegmentStats &stats, const TMatrix &t);

/// Inverts the classical extractor: a = (I + B) ivec, B from the counts `n`
/// that produced the i-vector.
VectorXd RecoverNaturalMean(const ClassicalIvector &ivec, const VectorXd &n,
                            const TMatrix &t);

/// E[x' M x] under the posterior of `lang`: trace[(C + mu mu') M].
/// M must be symmetric within 1e-10.
double ExpectedQuadratic(const PosteriorPair &pp, int lang, const MatrixXd &m);

/// Classical i-vectors stored with the zero-order counts needed to rebuild B.
struct IvectorSet {
  MatrixXd ivectors;  // S x R
  MatrixXd counts;    // S x Nc
  std::vector<std::optional<int>> labels;
  std::vector<std::string> languages;

  std::size_t size() const { return static_cast<std::size_t>(ivectors.rows()); }
};

IvectorSet ExtractIvectors(const StatsDataset &dataset, const TMatrix &t, int workers = 1);
/// Rebuilds (n, a) per segment from i-vectors and counts.
StatsDataset RecoverStats(const IvectorSet &ivectors, const TMatrix &t);

// Manifest kind=ivectors: arrays ivectors (S x R), n (S x Nc), labels (S).
void SaveIvectors(const IvectorSet &ivectors, const std::filesystem::path &manifest,
                  const std::string &subdir = "");
IvectorSet LoadIvectors(const std::filesystem::path &manifest);

}  // namespace ldvec

#endif  // LDVEC_POSTERIOR_H_
