// ldvec/scoring.cc

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

#include "ldvec/scoring.h"

namespace ldvec {

namespace {

using U64 = std::uint64_t;

void CheckInputs(const VectorXd &a, const MatrixXd &b, const Backend &backend) {
  const int r = backend.ivector_dim();
  Require(a.size() == r && b.rows() == r && b.cols() == r, ErrorCode::kShapeMismatch,
          "stats do not match the backend dimension");
  Require(a.allFinite() && b.allFinite(), ErrorCode::kNonFinite, "stats must be finite");
}

}  // namespace

std::string_view ScorerName(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kLd: return "ld";
    case ScorerKind::kCpf: return "cpf";
    case ScorerKind::kLgbe: return "lgbe";
  }
  return "?";
}

ScorerKind ParseScorer(std::string_view name) {
  if (name == "ld") return ScorerKind::kLd;
  if (name == "cpf") return ScorerKind::kCpf;
  if (name == "lgbe") return ScorerKind::kLgbe;
  Fail(ErrorCode::kInvalidArgument, "unknown scorer '" + std::string(name) + "'");
}

VectorXd LdScore(const VectorXd &a, const MatrixXd &b, const Backend &backend) {
  CheckInputs(a, b, backend);
  const MatrixXd &w = backend.precision;
  // u_l = W m_l as columns; one factorization of W + B serves every language.
  MatrixXd u = w * backend.means.transpose();
  Eigen::LLT<MatrixXd> llt = Cholesky(w + b, "W + B");
  MatrixXd cu = llt.solve(u);
  VectorXd cw_a = llt.solve(a);
  VectorXd scores(backend.num_languages());
  for (int l = 0; l < scores.size(); ++l) {
    // m'W m - m'W C W m = u'm - u'C u
    double quad = u.col(l).dot(backend.means.row(l).transpose()) - u.col(l).dot(cu.col(l));
    scores(l) = -0.5 * quad + u.col(l).dot(cw_a);
  }
  return scores;
}

VectorXd LdScore(const SegmentStats &stats, const Backend &backend, const TMatrix &t) {
  return LdScore(stats.a, PrecisionTerm(stats.n, t), backend);
}

VectorXd CpfScore(const VectorXd &a, const MatrixXd &b, const Backend &backend) {
  CheckInputs(a, b, backend);
  const MatrixXd &w = backend.precision;
  const Eigen::Index r = w.rows();
  MatrixXd e = MatrixXd::Identity(r, r) + b;
  MatrixXd u = w * backend.means.transpose();
  // Ct is symmetric, so m'W Ct = (Ct u)'.
  MatrixXd v = Cholesky(w + e, "W + I + B").solve(u);
  VectorXd scores(backend.num_languages());
  for (int l = 0; l < scores.size(); ++l) {
    VectorXd m = backend.means.row(l).transpose();
    scores(l) = -0.5 * v.col(l).dot(e * m) + v.col(l).dot(a);
  }
  return scores;
}

VectorXd CpfScore(const SegmentStats &stats, const Backend &backend, const TMatrix &t) {
  return CpfScore(stats.a, PrecisionTerm(stats.n, t), backend);
}

VectorXd LgbeScore(const ClassicalIvector &ivec, const Backend &backend) {
  Require(ivec.mean.size() == backend.ivector_dim(), ErrorCode::kShapeMismatch,
          "i-vector does not match the backend dimension");
  const MatrixXd &w = backend.precision;
  MatrixXd u = w * backend.means.transpose();
  VectorXd scores(backend.num_languages());
  for (int l = 0; l < scores.size(); ++l)
    scores(l) = -0.5 * u.col(l).dot(backend.means.row(l).transpose()) + u.col(l).dot(ivec.mean);
  return scores;
}

ScoreMatrix ScoreDataset(const StatsDataset &dataset, const Backend &backend,
                         const TMatrix &t, ScorerKind kind, int workers) {
  dataset.Validate();
  Require(dataset.ivector_dim == backend.ivector_dim() &&
              dataset.num_components == t.num_components(),
          ErrorCode::kShapeMismatch, "dataset does not match the models");
  ScoreMatrix out;
  out.kind = kind;
  out.languages = backend.labels;
  out.scores.resize(static_cast<Eigen::Index>(dataset.size()), backend.num_languages());
  out.labels.resize(dataset.size());
  ParallelFor(dataset.size(), workers, [&](std::size_t s) {
    const SegmentStats &seg = dataset.segments[s];
    VectorXd row;
    switch (kind) {
      case ScorerKind::kLd: row = LdScore(seg, backend, t); break;
      case ScorerKind::kCpf: row = CpfScore(seg, backend, t); break;
      case ScorerKind::kLgbe: row = LgbeScore(ComputeClassicalIvector(seg, t), backend); break;
    }
    out.scores.row(s) = row.transpose();
    out.labels[s] = seg.label;
  });
  return out;
}

ScoreMatrix ScoreFromIvectors(const IvectorSet &ivectors, const Backend &backend,
                              const TMatrix &t, ScorerKind kind, int workers) {
  return ScoreDataset(RecoverStats(ivectors, t), backend, t, kind, workers);
}

void SaveScores(const ScoreMatrix &scores, const std::filesystem::path &path,
                const std::string &subdir) {
  const auto s = static_cast<std::size_t>(scores.scores.rows());
  const int l = static_cast<int>(scores.scores.cols());
  Require(s >= 1 && l >= 1, ErrorCode::kZeroDimension, "empty score matrix");
  Require(scores.labels.size() == s, ErrorCode::kShapeMismatch, "one label slot per row");
  Require(scores.scores.allFinite(), ErrorCode::kNonFinite, "scores must be finite");
  Manifest m("scores");
  m.SetInt("S", static_cast<std::int64_t>(s));
  m.SetInt("L", l);
  m.Set("scorer", std::string(ScorerName(scores.kind)));
  m.SetLabels(scores.languages.empty() ? DefaultLanguageLabels(l) : scores.languages);
  m.PutArray(path, "scores", ToArray(scores.scores), subdir);
  m.PutArray(path, "labels", EncodeLabels(scores.labels, l), subdir);
  m.Save(path);
}

ScoreMatrix LoadScores(const std::filesystem::path &path) {
  Manifest m = Manifest::Load(path);
  m.ExpectKind("scores");
  Require(m.GetInt("S") >= 1 && m.GetInt("L") >= 1, ErrorCode::kDimensionMismatch,
          "S and L must be >= 1");
  const U64 s = m.GetInt("S"), l = m.GetInt("L");
  ScoreMatrix out;
  out.kind = ParseScorer(m.Get("scorer"));
  out.languages = m.Labels();
  Require(out.languages.size() == l, ErrorCode::kDimensionMismatch,
          "label list length differs from L");
  out.scores = ToMatrix(m.GetArray("scores", {s, l}));
  Require(out.scores.allFinite(), ErrorCode::kNonFinite, "scores must be finite");
  out.labels = m.HasArray("labels")
                   ? DecodeLabels(m.GetArray("labels", {s}), static_cast<int>(l))
                   : std::vector<std::optional<int>>(s);
  return out;
}

}  // namespace ldvec
