// ldvec/model.cc

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

#include "ldvec/model.h"

#include <cmath>

namespace ldvec {

namespace {

using U64 = std::uint64_t;

U64 AsDim(std::int64_t v, const std::string &key) {
  Require(v >= 1, ErrorCode::kDimensionMismatch, key + " must be >= 1");
  return static_cast<U64>(v);
}

}  // namespace

void Dims::Validate() const {
  Require(feat_dim >= 1 && ivector_dim >= 1 && num_components >= 1 && num_languages >= 1,
          ErrorCode::kInvalidArgument, "all dimensions must be >= 1");
}

std::vector<std::string> DefaultLanguageLabels(int num_languages) {
  std::vector<std::string> labels;
  for (int l = 0; l < num_languages; ++l) labels.push_back("lang" + std::to_string(l));
  return labels;
}

void Ubm::Validate() const {
  const int nc = num_components();
  Require(nc >= 1, ErrorCode::kDimensionMismatch, "UBM has no components");
  Require(means.rows() == nc && means.cols() >= 1, ErrorCode::kDimensionMismatch,
          "UBM means must be Nc x D");
  Require(static_cast<int>(cov_factors.size()) == nc, ErrorCode::kDimensionMismatch,
          "UBM needs one covariance factor per component");
  Require(weights.allFinite() && means.allFinite(), ErrorCode::kNonFinite,
          "UBM parameters must be finite");
  for (int i = 0; i < nc; ++i)
    Require(weights(i) > 0.0, ErrorCode::kInvalidWeights, "UBM weights must be positive");
  Require(std::abs(weights.sum() - 1.0) <= 1e-12, ErrorCode::kInvalidWeights,
          "UBM weights must sum to 1");
  const int d = feat_dim();
  for (int i = 0; i < nc; ++i) {
    const MatrixXd &f = cov_factors[i];
    Require(f.rows() == d && f.cols() == d, ErrorCode::kDimensionMismatch,
            "covariance factor must be D x D");
    Require(f.allFinite(), ErrorCode::kNonFinite, "covariance factor not finite");
    for (int r = 0; r < d; ++r) {
      Require(f(r, r) > 0.0, ErrorCode::kNotPositiveDefinite,
              "covariance factor diagonal must be positive");
      for (int c = r + 1; c < d; ++c)
        Require(f(r, c) == 0.0, ErrorCode::kNotPositiveDefinite,
                "covariance factor must be lower triangular");
    }
  }
}

VectorXd Ubm::Whiten(int i, const VectorXd &frame) const {
  VectorXd centred = frame - means.row(i).transpose();
  return cov_factors[i].triangularView<Eigen::Lower>().solve(centred);
}

TMatrix::TMatrix(std::vector<MatrixXd> b) : blocks(std::move(b)) {
  grams.reserve(blocks.size());
  for (const MatrixXd &t : blocks) grams.push_back(Symmetrize(t.transpose() * t));
}

void TMatrix::Validate() const {
  Require(!blocks.empty(), ErrorCode::kDimensionMismatch, "T has no blocks");
  Require(grams.size() == blocks.size(), ErrorCode::kDimensionMismatch,
          "one Gram block per T block required");
  const int d = feat_dim(), r = ivector_dim();
  Require(d >= 1 && r >= 1, ErrorCode::kDimensionMismatch, "empty T block");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Require(blocks[i].rows() == d && blocks[i].cols() == r, ErrorCode::kDimensionMismatch,
            "T blocks must all be D x R");
    Require(grams[i].rows() == r && grams[i].cols() == r, ErrorCode::kDimensionMismatch,
            "Gram blocks must be R x R");
    Require(blocks[i].allFinite() && grams[i].allFinite(), ErrorCode::kNonFinite,
            "T must be finite");
    MatrixXd direct = blocks[i].transpose() * blocks[i];
    double scale = std::max(1.0, grams[i].cwiseAbs().maxCoeff());
    Require((grams[i] - direct).cwiseAbs().maxCoeff() <= 1e-12 * scale,
            ErrorCode::kDimensionMismatch, "Gram block disagrees with T_i'T_i");
  }
}

void Backend::Validate() const {
  const int l = num_languages(), r = ivector_dim();
  Require(l >= 1 && r >= 1, ErrorCode::kDimensionMismatch, "backend means must be L x R");
  Require(precision.rows() == r && precision.cols() == r, ErrorCode::kDimensionMismatch,
          "precision must be R x R");
  Require(static_cast<int>(labels.size()) == l, ErrorCode::kInvalidLabels,
          "one label per language required");
  ValidateLabels(labels);
  Require(means.allFinite(), ErrorCode::kNonFinite, "backend means must be finite");
  RequireSymmetric(precision, 1e-10, "backend precision");
  Cholesky(precision, "backend precision");
}

void SaveUbm(const Ubm &ubm, const std::filesystem::path &path, const std::string &subdir) {
  ubm.Validate();
  Manifest m("ubm");
  m.SetInt("D", ubm.feat_dim());
  m.SetInt("Nc", ubm.num_components());
  m.PutArray(path, "weights", ToArray(ubm.weights), subdir);
  m.PutArray(path, "means", ToArray(ubm.means), subdir);
  m.PutArray(path, "cov_factors", ToArray(ubm.cov_factors), subdir);
  m.Save(path);
}

void SaveTMatrix(const TMatrix &t, const std::filesystem::path &path,
                 const std::string &subdir) {
  t.Validate();
  Manifest m("tmatrix");
  m.SetInt("D", t.feat_dim());
  m.SetInt("R", t.ivector_dim());
  m.SetInt("Nc", t.num_components());
  m.PutArray(path, "blocks", ToArray(t.blocks), subdir);
  m.PutArray(path, "grams", ToArray(t.grams), subdir);
  m.Save(path);
}

void SaveBackend(const Backend &backend, const std::filesystem::path &path,
                 const std::string &subdir) {
  backend.Validate();
  Manifest m("backend");
  m.SetInt("R", backend.ivector_dim());
  m.SetInt("L", backend.num_languages());
  m.SetLabels(backend.labels);
  m.PutArray(path, "means", ToArray(backend.means), subdir);
  m.PutArray(path, "precision", ToArray(backend.precision), subdir);
  m.Save(path);
}

Ubm LoadUbm(const std::filesystem::path &path) {
  Manifest m = Manifest::Load(path);
  m.ExpectKind("ubm");
  U64 d = AsDim(m.GetInt("D"), "D"), nc = AsDim(m.GetInt("Nc"), "Nc");
  Ubm ubm;
  ubm.weights = ToVector(m.GetArray("weights", {nc}));
  ubm.means = ToMatrix(m.GetArray("means", {nc, d}));
  ubm.cov_factors = ToMatrixStack(m.GetArray("cov_factors", {nc, d, d}));
  ubm.Validate();
  return ubm;
}

TMatrix LoadTMatrix(const std::filesystem::path &path) {
  Manifest m = Manifest::Load(path);
  m.ExpectKind("tmatrix");
  U64 d = AsDim(m.GetInt("D"), "D"), r = AsDim(m.GetInt("R"), "R"),
      nc = AsDim(m.GetInt("Nc"), "Nc");
  TMatrix t(ToMatrixStack(m.GetArray("blocks", {nc, d, r})));
  if (m.HasArray("grams")) {
    std::vector<MatrixXd> stored = ToMatrixStack(m.GetArray("grams", {nc, r, r}));
    for (std::size_t i = 0; i < stored.size(); ++i) {
      double scale = std::max(1.0, stored[i].cwiseAbs().maxCoeff());
      Require((stored[i] - t.grams[i]).cwiseAbs().maxCoeff() <= 1e-12 * scale,
              ErrorCode::kDimensionMismatch, "stored Gram block disagrees with T_i'T_i");
    }
    t.grams = std::move(stored);
  }
  t.Validate();
  return t;
}

Backend LoadBackend(const std::filesystem::path &path) {
  Manifest m = Manifest::Load(path);
  m.ExpectKind("backend");
  U64 r = AsDim(m.GetInt("R"), "R"), l = AsDim(m.GetInt("L"), "L");
  Backend backend;
  backend.means = ToMatrix(m.GetArray("means", {l, r}));
  backend.precision = ToMatrix(m.GetArray("precision", {r, r}));
  backend.labels = m.Has("labels") ? m.Labels() : DefaultLanguageLabels(static_cast<int>(l));
  backend.Validate();
  return backend;
}

std::filesystem::path SaveModel(const Ubm &ubm, const std::filesystem::path &dir) {
  auto path = dir / "ubm.manifest";
  SaveUbm(ubm, path);
  return path;
}

std::filesystem::path SaveModel(const TMatrix &t, const std::filesystem::path &dir) {
  auto path = dir / "tmatrix.manifest";
  SaveTMatrix(t, path);
  return path;
}

std::filesystem::path SaveModel(const Backend &backend, const std::filesystem::path &dir) {
  auto path = dir / "backend.manifest";
  SaveBackend(backend, path);
  return path;
}

}  // namespace ldvec
