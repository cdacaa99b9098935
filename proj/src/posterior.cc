// ldvec/posterior.cc

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

#include "ldvec/posterior.h"

namespace ldvec {

namespace {

using U64 = std::uint64_t;

void CheckStatsShape(const SegmentStats &stats, const TMatrix &t) {
  Require(stats.n.size() == t.num_components() && stats.a.size() == t.ivector_dim(),
          ErrorCode::kShapeMismatch, "stats do not match T");
  Require(stats.a.allFinite() && stats.n.allFinite(), ErrorCode::kNonFinite,
          "stats must be finite");
}

}  // namespace

PosteriorPair ComputePosterior(const VectorXd &a, const MatrixXd &b, const Backend &backend) {
  const int r = backend.ivector_dim();
  Require(a.size() == r && b.rows() == r && b.cols() == r, ErrorCode::kShapeMismatch,
          "natural parameters do not match the backend dimension");
  const MatrixXd &w = backend.precision;
  Eigen::LLT<MatrixXd> llt = Cholesky(w + b, "W + B");
  PosteriorPair pp;
  pp.cov = SpdInverse(llt);
  // Columns of rhs are W m_l + a.
  MatrixXd rhs = (w * backend.means.transpose()).colwise() + a;
  pp.means = llt.solve(rhs).transpose();
  return pp;
}

PosteriorPair ComputePosterior(const SegmentStats &stats, const Backend &backend,
                               const TMatrix &t) {
  CheckStatsShape(stats, t);
  return ComputePosterior(stats.a, PrecisionTerm(stats.n, t), backend);
}

ClassicalIvector ComputeClassicalIvector(const SegmentStats &stats, const TMatrix &t) {
  CheckStatsShape(stats, t);
  const int r = t.ivector_dim();
  MatrixXd e = MatrixXd::Identity(r, r) + PrecisionTerm(stats.n, t);
  return ClassicalIvector{Cholesky(e, "I + B").solve(stats.a)};
}

VectorXd RecoverNaturalMean(const ClassicalIvector &ivec, const VectorXd &n, const TMatrix &t) {
  Require(ivec.mean.size() == t.ivector_dim(), ErrorCode::kShapeMismatch,
          "i-vector dimension does not match T");
  return ivec.mean + PrecisionTerm(n, t) * ivec.mean;
}

double ExpectedQuadratic(const PosteriorPair &pp, int lang, const MatrixXd &m) {
  Require(lang >= 0 && lang < pp.num_languages(), ErrorCode::kLabelOutOfRange,
          "language index out of range");
  Require(m.rows() == pp.cov.rows() && m.cols() == pp.cov.cols(), ErrorCode::kShapeMismatch,
          "M must be R x R");
  Require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-10, ErrorCode::kNotSymmetric,
          "M must be symmetric");
  VectorXd mu = pp.mean(lang);
  return (pp.cov.cwiseProduct(m)).sum() + mu.dot(m * mu);
}

IvectorSet ExtractIvectors(const StatsDataset &dataset, const TMatrix &t, int workers) {
  dataset.Validate();
  const auto s = static_cast<Eigen::Index>(dataset.size());
  IvectorSet out;
  out.ivectors.resize(s, t.ivector_dim());
  out.counts.resize(s, t.num_components());
  out.labels.resize(dataset.size());
  out.languages = dataset.languages;
  ParallelFor(dataset.size(), workers, [&](std::size_t k) {
    const SegmentStats &seg = dataset.segments[k];
    out.ivectors.row(k) = ComputeClassicalIvector(seg, t).mean.transpose();
    out.counts.row(k) = seg.n.transpose();
    out.labels[k] = seg.label;
  });
  return out;
}

StatsDataset RecoverStats(const IvectorSet &ivectors, const TMatrix &t) {
  Require(ivectors.ivectors.cols() == t.ivector_dim() &&
              ivectors.counts.cols() == t.num_components() &&
              ivectors.counts.rows() == ivectors.ivectors.rows() &&
              ivectors.labels.size() == ivectors.size(),
          ErrorCode::kShapeMismatch, "i-vectors must be paired with their counts");
  StatsDataset out;
  out.languages = ivectors.languages;
  out.num_components = t.num_components();
  out.ivector_dim = t.ivector_dim();
  out.segments.resize(ivectors.size());
  for (std::size_t k = 0; k < ivectors.size(); ++k) {
    VectorXd n = ivectors.counts.row(k).transpose();
    ClassicalIvector ivec{ivectors.ivectors.row(k).transpose()};
    out.segments[k] = SegmentStats{n, RecoverNaturalMean(ivec, n, t), ivectors.labels[k]};
  }
  out.Validate();
  return out;
}

void SaveIvectors(const IvectorSet &ivectors, const std::filesystem::path &path,
                  const std::string &subdir) {
  Require(ivectors.size() >= 1, ErrorCode::kZeroDimension, "no i-vectors to save");
  Require(ivectors.counts.rows() == ivectors.ivectors.rows() &&
              ivectors.labels.size() == ivectors.size(),
          ErrorCode::kShapeMismatch, "i-vectors must be paired with counts and labels");
  const int l = static_cast<int>(ivectors.languages.size());
  Manifest m("ivectors");
  m.SetInt("R", ivectors.ivectors.cols());
  m.SetInt("Nc", ivectors.counts.cols());
  m.SetInt("S", static_cast<std::int64_t>(ivectors.size()));
  m.SetInt("L", l);
  if (l > 0) m.SetLabels(ivectors.languages);
  m.PutArray(path, "ivectors", ToArray(ivectors.ivectors), subdir);
  m.PutArray(path, "n", ToArray(ivectors.counts), subdir);
  m.PutArray(path, "labels", EncodeLabels(ivectors.labels, l), subdir);
  m.Save(path);
}

IvectorSet LoadIvectors(const std::filesystem::path &path) {
  Manifest m = Manifest::Load(path);
  m.ExpectKind("ivectors");
  Require(m.GetInt("R") >= 1 && m.GetInt("Nc") >= 1 && m.GetInt("S") >= 1,
          ErrorCode::kDimensionMismatch, "R, Nc and S must be >= 1");
  const U64 r = m.GetInt("R"), nc = m.GetInt("Nc"), s = m.GetInt("S");
  IvectorSet out;
  out.languages = m.Labels();
  Require(!m.Has("L") || m.GetInt("L") == static_cast<std::int64_t>(out.languages.size()),
          ErrorCode::kDimensionMismatch, "L disagrees with the label list");
  out.ivectors = ToMatrix(m.GetArray("ivectors", {s, r}));
  Require(m.HasArray("n"), ErrorCode::kManifestParse,
          "i-vectors need their zero-order counts (array n)");
  out.counts = ToMatrix(m.GetArray("n", {s, nc}));
  out.labels =
      DecodeLabels(m.GetArray("labels", {s}), static_cast<int>(out.languages.size()));
  return out;
}

}  // namespace ldvec
