// ldvec/model.h

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

#ifndef LDVEC_MODEL_H_
#define LDVEC_MODEL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "ldvec/linalg.h"
#include "ldvec/manifest.h"

namespace ldvec {

/// Feature dim, i-vector dim, UBM component count, language count.
struct Dims {
  int feat_dim = 1;       // D
  int ivector_dim = 1;    // R
  int num_components = 1; // Nc
  int num_languages = 1;  // L

  void Validate() const;
  bool operator==(const Dims &) const = default;
};

/// Gaussian mixture over raw frames. Covariances are kept as lower-triangular
/// Cholesky factors; the only use the pipeline has for them is whitening.
struct Ubm {
  VectorXd weights;                  // Nc
  MatrixXd means;                    // Nc x D
  std::vector<MatrixXd> cov_factors; // Nc of D x D, lower triangular

  int num_components() const { return static_cast<int>(weights.size()); }
  int feat_dim() const { return static_cast<int>(means.cols()); }

  /// Checks weights (positive, sum to 1 within 1e-12), shapes, and that each
  /// factor is lower triangular with a strictly positive diagonal.
  void Validate() const;

  /// Centred, whitened frame for component i: cov_factor_i^{-1} (x - mean_i).
  VectorXd Whiten(int i, const VectorXd &frame) const;
};

/// Per-component factor loadings T_i (D x R) with their Gram blocks T_i'T_i.
struct TMatrix {
  std::vector<MatrixXd> blocks;
  std::vector<MatrixXd> grams;

  TMatrix() = default;
  /// Computes the Gram blocks from `blocks`.
  explicit TMatrix(std::vector<MatrixXd> blocks);

  int num_components() const { return static_cast<int>(blocks.size()); }
  int feat_dim() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].rows()); }
  int ivector_dim() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].cols()); }

  /// Shapes agree and max|G_i - T_i'T_i| <= 1e-12 * max(1, max|G_i|).
  void Validate() const;
};

/// Trainable linear Gaussian backend: language means m_l (rows) and the
/// shared within-class precision W.
struct Backend {
  MatrixXd means;      // L x R
  MatrixXd precision;  // R x R, SPD
  std::vector<std::string> labels;

  int num_languages() const { return static_cast<int>(means.rows()); }
  int ivector_dim() const { return static_cast<int>(means.cols()); }

  /// W symmetric within 1e-10 and Cholesky-factorable; labels valid.
  void Validate() const;
};

std::vector<std::string> DefaultLanguageLabels(int num_languages);

// Manifest round-trips. Save* write arrays next to the manifest (or under
// `subdir`) and return nothing; Load* validate every invariant.
void SaveUbm(const Ubm &ubm, const std::filesystem::path &manifest,
             const std::string &subdir = "");
void SaveTMatrix(const TMatrix &t, const std::filesystem::path &manifest,
                 const std::string &subdir = "");
void SaveBackend(const Backend &backend, const std::filesystem::path &manifest,
                 const std::string &subdir = "");

Ubm LoadUbm(const std::filesystem::path &manifest);
/// Grams are recomputed from the blocks and checked against the stored copy
/// when one is present.
TMatrix LoadTMatrix(const std::filesystem::path &manifest);
Backend LoadBackend(const std::filesystem::path &manifest);

/// Writes <dir>/<kind>.manifest and returns its path.
std::filesystem::path SaveModel(const Ubm &ubm, const std::filesystem::path &dir);
std::filesystem::path SaveModel(const TMatrix &t, const std::filesystem::path &dir);
std::filesystem::path SaveModel(const Backend &backend, const std::filesystem::path &dir);

}  // namespace ldvec

#endif  // LDVEC_MODEL_H_
