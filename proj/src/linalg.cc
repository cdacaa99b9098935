// ldvec/linalg.cc

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

#include "ldvec/linalg.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ldvec {

double RelativeAsymmetry(const MatrixXd &m) {
  if (m.size() == 0) return 0.0;
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

void RequireSymmetric(const MatrixXd &m, double tol, const std::string &what) {
  Require(m.rows() == m.cols(), ErrorCode::kShapeMismatch, what + " is not square");
  Require(RelativeAsymmetry(m) <= tol, ErrorCode::kNotSymmetric,
          what + " is not symmetric");
}

bool AllFinite(const MatrixXd &m) { return m.allFinite(); }

Eigen::LLT<MatrixXd> Cholesky(const MatrixXd &m, const std::string &what) {
  Require(m.rows() == m.cols(), ErrorCode::kShapeMismatch, what + " is not square");
  Require(m.allFinite(), ErrorCode::kNonFinite, what + " has non-finite entries");
  Eigen::LLT<MatrixXd> llt(m);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    const MatrixXd &l = llt.matrixLLT();
    for (Eigen::Index k = 0; k < l.rows(); ++k)
      if (!(l(k, k) > 0.0) || !std::isfinite(l(k, k))) ok = false;
  }
  Require(ok, ErrorCode::kNotPositiveDefinite, what + " is not positive definite");
  return llt;
}

MatrixXd SpdInverse(const Eigen::LLT<MatrixXd> &llt) {
  const Eigen::Index n = llt.matrixLLT().rows();
  return Symmetrize(llt.solve(MatrixXd::Identity(n, n)));
}

double LogDet(const Eigen::LLT<MatrixXd> &llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

MatrixXd FloorEigenvalues(const MatrixXd &m, double floor) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Symmetrize(m));
  Require(eig.info() == Eigen::Success, ErrorCode::kNonFinite,
          "eigendecomposition failed");
  VectorXd values = eig.eigenvalues().cwiseMax(floor);
  return Symmetrize(eig.eigenvectors() * values.asDiagonal() *
                    eig.eigenvectors().transpose());
}

void ParallelFor(std::size_t n, int workers, const std::function<void(std::size_t)> &fn) {
  std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (std::thread &th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ldvec
