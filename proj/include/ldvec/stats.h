// ldvec/stats.h

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

#ifndef LDVEC_STATS_H_
#define LDVEC_STATS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ldvec/model.h"

namespace ldvec {

/// Sufficient statistics of one segment: zero-order counts n (Nc) and the
/// projected first-order statistics a = sum_i T_i' f_i (R). The precision
/// term B = sum_i n_i T_i'T_i is rebuilt from n on demand.
struct SegmentStats {
  VectorXd n;
  VectorXd a;
  std::optional<int> label;

  /// Both n and a multiplied by k, i.e. the stats of a k-fold longer
  /// segment with the same empirical distribution.
  SegmentStats Scaled(double k) const;
};

SegmentStats EmptyStats(int num_components, int ivector_dim,
                        std::optional<int> label = std::nullopt);

struct StatsDataset {
  std::vector<SegmentStats> segments;
  std::vector<std::string> languages;
  int num_components = 0;
  int ivector_dim = 0;

  std::size_t size() const { return segments.size(); }
  int num_languages() const { return static_cast<int>(languages.size()); }
  /// Shapes agree, counts nonnegative, values finite, labels < L.
  void Validate() const;
};

/// Raw feature matrices (T_s x D each) with optional language labels.
struct FeatureSet {
  std::vector<MatrixXd> segments;
  std::vector<std::optional<int>> labels;
  std::vector<std::string> languages;
  int feat_dim = 0;

  std::size_t size() const { return segments.size(); }
};

/// UBM posteriors q (T_s x Nc), computed in the log domain with
/// max-subtraction. Rows sum to one.
MatrixXd Responsibilities(const MatrixXd &frames, const Ubm &ubm);

/// Drops posteriors below `threshold` and renormalizes each row. The largest
/// entry of a row always survives.
MatrixXd PruneResponsibilities(const MatrixXd &q, double threshold);

/// n_i = sum_t q_ti; a = sum_i T_i' sum_t q_ti * whiten_i(frame_t).
SegmentStats Accumulate(const MatrixXd &frames, const MatrixXd &q, const Ubm &ubm,
                        const TMatrix &t);

/// B = sum_i n_i G_i. Throws kNegativeCount for negative n.
MatrixXd PrecisionTerm(const VectorXd &n, const TMatrix &t);

/// Responsibilities, optional pruning (threshold <= 0 disables) and
/// accumulation in one call.
SegmentStats ComputeSegmentStats(const MatrixXd &frames, const Ubm &ubm, const TMatrix &t,
                                 double prune_threshold = 0.0);

StatsDataset ComputeDatasetStats(const FeatureSet &features, const Ubm &ubm,
                                 const TMatrix &t, double prune_threshold = 0.0,
                                 int workers = 1);

// Stats manifest: kind=stats, arrays n (S x Nc), a (S x R), labels (S, -1
// for unlabeled).
void SaveStats(const StatsDataset &dataset, const std::filesystem::path &manifest,
               const std::string &subdir = "");
StatsDataset LoadStats(const std::filesystem::path &manifest);

// Features manifest: kind=features, arrays lengths (S), labels (S) and, when
// any frames exist, frames (sum T_s x D) concatenated in segment order.
void SaveFeatures(const FeatureSet &features, const std::filesystem::path &manifest,
                  const std::string &subdir = "");
FeatureSet LoadFeatures(const std::filesystem::path &manifest);

/// Shared by every dataset manifest: integer labels stored as doubles.
Array EncodeLabels(const std::vector<std::optional<int>> &labels, int num_languages);
std::vector<std::optional<int>> DecodeLabels(const Array &array, int num_languages);

}  // namespace ldvec

#endif  // LDVEC_STATS_H_
