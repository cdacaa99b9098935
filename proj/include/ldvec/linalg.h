// ldvec/linalg.h

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

#ifndef LDVEC_LINALG_H_
#define LDVEC_LINALG_H_

#include <cstddef>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "ldvec/error.h"

namespace ldvec {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd Symmetrize(const MatrixXd &m) { return 0.5 * (m + m.transpose()); }

/// Max-abs asymmetry relative to max(1, max|m|).
double RelativeAsymmetry(const MatrixXd &m);

void RequireSymmetric(const MatrixXd &m, double tol, const std::string &what);

/// Cholesky factorization; throws kNotPositiveDefinite on failure or on a
/// non-finite factor.
Eigen::LLT<MatrixXd> Cholesky(const MatrixXd &m, const std::string &what);

/// Inverse of an SPD matrix through its Cholesky factor, symmetrized.
MatrixXd SpdInverse(const Eigen::LLT<MatrixXd> &llt);

double LogDet(const Eigen::LLT<MatrixXd> &llt);

/// Clamps the eigenvalues of symmetric `m` from below at `floor`.
MatrixXd FloorEigenvalues(const MatrixXd &m, double floor);

bool AllFinite(const MatrixXd &m);

/// Runs fn(k) for k in [0, n) over up to `workers` threads. Each index is
/// visited exactly once; callers write into preallocated slots, so results
/// do not depend on the worker count.
void ParallelFor(std::size_t n, int workers, const std::function<void(std::size_t)> &fn);

}  // namespace ldvec

#endif  // LDVEC_LINALG_H_
