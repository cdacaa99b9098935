// ldvec/stats.cc

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

#include "ldvec/stats.h"

#include <cmath>
#include <numbers>

namespace ldvec {

namespace {

using U64 = std::uint64_t;

}  // namespace

SegmentStats SegmentStats::Scaled(double k) const {
  return SegmentStats{k * n, k * a, label};
}

SegmentStats EmptyStats(int num_components, int ivector_dim, std::optional<int> label) {
  return SegmentStats{VectorXd::Zero(num_components), VectorXd::Zero(ivector_dim), label};
}

void StatsDataset::Validate() const {
  Require(num_components >= 1 && ivector_dim >= 1, ErrorCode::kDimensionMismatch,
          "stats dataset dimensions must be >= 1");
  ValidateLabels(languages);
  for (const SegmentStats &s : segments) {
    Require(s.n.size() == num_components && s.a.size() == ivector_dim,
            ErrorCode::kDimensionMismatch, "segment stats have wrong shape");
    Require(s.n.allFinite() && s.a.allFinite(), ErrorCode::kNonFinite,
            "segment stats must be finite");
    Require((s.n.array() >= 0.0).all(), ErrorCode::kNegativeCount,
            "zero-order counts must be nonnegative");
    if (s.label)
      Require(*s.label >= 0 && *s.label < num_languages(), ErrorCode::kLabelOutOfRange,
              "label index " + std::to_string(*s.label) + " out of range");
  }
}

MatrixXd Responsibilities(const MatrixXd &frames, const Ubm &ubm) {
  const int nc = ubm.num_components(), d = ubm.feat_dim();
  Require(frames.rows() == 0 || frames.cols() == d, ErrorCode::kShapeMismatch,
          "frame dimension does not match the UBM");
  Require(frames.allFinite(), ErrorCode::kNonFinite, "frames contain non-finite values");

  // Per-component constant: log w_i - D/2 log 2pi - log|L_i|.
  VectorXd log_const(nc);
  for (int i = 0; i < nc; ++i)
    log_const(i) = std::log(ubm.weights(i)) - 0.5 * d * std::log(2.0 * std::numbers::pi) -
                   ubm.cov_factors[i].diagonal().array().log().sum();

  MatrixXd q(frames.rows(), nc);
  for (int i = 0; i < nc; ++i) {
    // Whiten all frames at once: L_i^{-1} (X - mu_i)'.
    MatrixXd centred = (frames.rowwise() - ubm.means.row(i)).transpose();
    MatrixXd white = ubm.cov_factors[i].triangularView<Eigen::Lower>().solve(centred);
    q.col(i) = (log_const(i) - 0.5 * white.colwise().squaredNorm().array()).transpose();
  }
  for (Eigen::Index t = 0; t < q.rows(); ++t) {
    double max = q.row(t).maxCoeff();
    q.row(t) = (q.row(t).array() - max).exp();
    q.row(t) /= q.row(t).sum();
  }
  return q;
}

MatrixXd PruneResponsibilities(const MatrixXd &q, double threshold) {
  MatrixXd out = q;
  for (Eigen::Index t = 0; t < out.rows(); ++t) {
    Eigen::Index best = 0;
    out.row(t).maxCoeff(&best);
    for (Eigen::Index i = 0; i < out.cols(); ++i)
      if (i != best && out(t, i) < threshold) out(t, i) = 0.0;
    out.row(t) /= out.row(t).sum();
  }
  return out;
}

SegmentStats Accumulate(const MatrixXd &frames, const MatrixXd &q, const Ubm &ubm,
                        const TMatrix &t) {
  const int nc = ubm.num_components(), d = ubm.feat_dim();
  Require(t.num_components() == nc && t.feat_dim() == d, ErrorCode::kShapeMismatch,
          "T does not match the UBM");
  Require(q.rows() == frames.rows() && q.cols() == nc, ErrorCode::kShapeMismatch,
          "responsibilities must be T_s x Nc");
  Require(frames.rows() == 0 || frames.cols() == d, ErrorCode::kShapeMismatch,
          "frame dimension does not match the UBM");

  SegmentStats stats = EmptyStats(nc, t.ivector_dim());
  if (frames.rows() == 0) return stats;
  stats.n = q.colwise().sum().transpose();
  for (int i = 0; i < nc; ++i) {
    // Whitening is affine, so sum_t q_ti whiten_i(x_t) = L_i^{-1}(sum_t q_ti x_t - n_i mu_i).
    VectorXd first = frames.transpose() * q.col(i) - stats.n(i) * ubm.means.row(i).transpose();
    VectorXd whitened = ubm.cov_factors[i].triangularView<Eigen::Lower>().solve(first);
    stats.a += t.blocks[i].transpose() * whitened;
  }
  return stats;
}

MatrixXd PrecisionTerm(const VectorXd &n, const TMatrix &t) {
  Require(n.size() == t.num_components(), ErrorCode::kShapeMismatch,
          "count vector length must equal Nc");
  const int r = t.ivector_dim();
  MatrixXd b = MatrixXd::Zero(r, r);
  for (int i = 0; i < n.size(); ++i) {
    Require(n(i) >= 0.0, ErrorCode::kNegativeCount, "negative zero-order count");
    Require(std::isfinite(n(i)), ErrorCode::kNonFinite, "non-finite zero-order count");
    if (n(i) != 0.0) b.noalias() += n(i) * t.grams[i];
  }
  return b;
}

SegmentStats ComputeSegmentStats(const MatrixXd &frames, const Ubm &ubm, const TMatrix &t,
                                 double prune_threshold) {
  MatrixXd q = Responsibilities(frames, ubm);
  if (prune_threshold > 0.0) q = PruneResponsibilities(q, prune_threshold);
  return Accumulate(frames, q, ubm, t);
}

StatsDataset ComputeDatasetStats(const FeatureSet &features, const Ubm &ubm,
                                 const TMatrix &t, double prune_threshold, int workers) {
  Require(features.labels.size() == features.segments.size(), ErrorCode::kShapeMismatch,
          "one label slot per segment required");
  StatsDataset out;
  out.languages = features.languages;
  out.num_components = ubm.num_components();
  out.ivector_dim = t.ivector_dim();
  out.segments.resize(features.size());
  ParallelFor(features.size(), workers, [&](std::size_t s) {
    out.segments[s] = ComputeSegmentStats(features.segments[s], ubm, t, prune_threshold);
    out.segments[s].label = features.labels[s];
  });
  out.Validate();
  return out;
}

Array EncodeLabels(const std::vector<std::optional<int>> &labels, int num_languages) {
  Array array({static_cast<U64>(labels.size())}, {});
  array.values.reserve(labels.size());
  for (const auto &label : labels) {
    if (label) {
      Require(*label >= 0 && *label < num_languages, ErrorCode::kLabelOutOfRange,
              "label index " + std::to_string(*label) + " >= L");
      array.values.push_back(*label);
    } else {
      array.values.push_back(-1.0);
    }
  }
  return array;
}

std::vector<std::optional<int>> DecodeLabels(const Array &array, int num_languages) {
  std::vector<std::optional<int>> labels;
  labels.reserve(array.size());
  for (double v : array.values) {
    Require(std::isfinite(v) && v == std::floor(v), ErrorCode::kInvalidLabels,
            "label entries must be integers");
    if (v == -1.0) {
      labels.push_back(std::nullopt);
    } else {
      Require(v >= 0.0 && v < num_languages, ErrorCode::kLabelOutOfRange,
              "label index out of range");
      labels.push_back(static_cast<int>(v));
    }
  }
  return labels;
}

void SaveStats(const StatsDataset &dataset, const std::filesystem::path &path,
               const std::string &subdir) {
  dataset.Validate();
  const std::size_t s = dataset.size();
  Require(s >= 1, ErrorCode::kZeroDimension, "cannot save an empty stats dataset");
  MatrixXd n(s, dataset.num_components), a(s, dataset.ivector_dim);
  std::vector<std::optional<int>> labels(s);
  for (std::size_t k = 0; k < s; ++k) {
    n.row(k) = dataset.segments[k].n.transpose();
    a.row(k) = dataset.segments[k].a.transpose();
    labels[k] = dataset.segments[k].label;
  }
  Manifest m("stats");
  m.SetInt("Nc", dataset.num_components);
  m.SetInt("R", dataset.ivector_dim);
  m.SetInt("S", static_cast<std::int64_t>(s));
  m.SetInt("L", dataset.num_languages());
  if (!dataset.languages.empty()) m.SetLabels(dataset.languages);
  m.PutArray(path, "n", ToArray(n), subdir);
  m.PutArray(path, "a", ToArray(a), subdir);
  m.PutArray(path, "labels", EncodeLabels(labels, dataset.num_languages()), subdir);
  m.Save(path);
}

StatsDataset LoadStats(const std::filesystem::path &path) {
  Manifest m = Manifest::Load(path);
  m.ExpectKind("stats");
  StatsDataset dataset;
  dataset.num_components = static_cast<int>(m.GetInt("Nc"));
  dataset.ivector_dim = static_cast<int>(m.GetInt("R"));
  Require(dataset.num_components >= 1 && dataset.ivector_dim >= 1 && m.GetInt("S") >= 1,
          ErrorCode::kDimensionMismatch, "Nc, R and S must be >= 1");
  const U64 s = static_cast<U64>(m.GetInt("S"));
  dataset.languages = m.Labels();
  Require(!m.Has("L") || m.GetInt("L") == dataset.num_languages(),
          ErrorCode::kDimensionMismatch, "L disagrees with the label list");
  MatrixXd n = ToMatrix(m.GetArray("n", {s, static_cast<U64>(dataset.num_components)}));
  MatrixXd a = ToMatrix(m.GetArray("a", {s, static_cast<U64>(dataset.ivector_dim)}));
  auto labels = DecodeLabels(m.GetArray("labels", {s}), dataset.num_languages());
  dataset.segments.resize(s);
  for (U64 k = 0; k < s; ++k)
    dataset.segments[k] = SegmentStats{n.row(k).transpose(), a.row(k).transpose(), labels[k]};
  dataset.Validate();
  return dataset;
}

void SaveFeatures(const FeatureSet &features, const std::filesystem::path &path,
                  const std::string &subdir) {
  Require(features.size() >= 1, ErrorCode::kZeroDimension, "no segments to save");
  Require(features.labels.size() == features.size(), ErrorCode::kShapeMismatch,
          "one label slot per segment required");
  Require(features.feat_dim >= 1, ErrorCode::kDimensionMismatch, "D must be >= 1");
  Eigen::Index total = 0;
  VectorXd lengths(features.size());
  for (std::size_t s = 0; s < features.size(); ++s) {
    const MatrixXd &f = features.segments[s];
    Require(f.rows() == 0 || f.cols() == features.feat_dim, ErrorCode::kShapeMismatch,
            "segment has wrong feature dimension");
    lengths(s) = static_cast<double>(f.rows());
    total += f.rows();
  }
  Manifest m("features");
  m.SetInt("D", features.feat_dim);
  m.SetInt("S", static_cast<std::int64_t>(features.size()));
  m.SetInt("L", static_cast<std::int64_t>(features.languages.size()));
  if (!features.languages.empty()) m.SetLabels(features.languages);
  m.PutArray(path, "lengths", ToArray(lengths), subdir);
  m.PutArray(path, "labels",
             EncodeLabels(features.labels, static_cast<int>(features.languages.size())),
             subdir);
  if (total > 0) {
    MatrixXd frames(total, features.feat_dim);
    Eigen::Index row = 0;
    for (const MatrixXd &f : features.segments) {
      if (f.rows() == 0) continue;
      frames.middleRows(row, f.rows()) = f;
      row += f.rows();
    }
    m.PutArray(path, "frames", ToArray(frames), subdir);
  }
  m.Save(path);
}

FeatureSet LoadFeatures(const std::filesystem::path &path) {
  Manifest m = Manifest::Load(path);
  m.ExpectKind("features");
  FeatureSet features;
  features.feat_dim = static_cast<int>(m.GetInt("D"));
  Require(features.feat_dim >= 1 && m.GetInt("S") >= 1, ErrorCode::kDimensionMismatch,
          "D and S must be >= 1");
  const U64 s = static_cast<U64>(m.GetInt("S"));
  features.languages = m.Labels();
  VectorXd lengths = ToVector(m.GetArray("lengths", {s}));
  features.labels =
      DecodeLabels(m.GetArray("labels", {s}), static_cast<int>(features.languages.size()));
  U64 total = 0;
  for (double len : lengths) {
    Require(len >= 0 && len == std::floor(len), ErrorCode::kManifestParse,
            "segment lengths must be nonnegative integers");
    total += static_cast<U64>(len);
  }
  MatrixXd frames(0, features.feat_dim);
  if (total > 0)
    frames = ToMatrix(m.GetArray("frames", {total, static_cast<U64>(features.feat_dim)}));
  else
    Require(!m.HasArray("frames"), ErrorCode::kDimensionMismatch, "unexpected frames array");
  Eigen::Index row = 0;
  for (double len : lengths) {
    auto rows = static_cast<Eigen::Index>(len);
    features.segments.push_back(frames.middleRows(row, rows));
    row += rows;
  }
  return features;
}

}  // namespace ldvec
