// ldvec/evaluation.h

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

#ifndef LDVEC_EVALUATION_H_
#define LDVEC_EVALUATION_H_

#include <string>
#include <vector>

#include "ldvec/scoring.h"

namespace ldvec {

struct EvalReport {
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;  // L x L, rows = true language
  /// Mean of -log softmax(scores)[label] under a flat prior.
  double log_loss = 0.0;
  std::size_t num_segments = 0;
};

/// Argmax decisions (ties go to the lowest index) and flat-prior log loss.
/// Every row must carry a label.
EvalReport Evaluate(const MatrixXd &scores, const std::vector<std::optional<int>> &labels);
EvalReport Evaluate(const ScoreMatrix &scores);

/// Human-readable summary with the confusion matrix.
std::string FormatReport(const EvalReport &report, const std::vector<std::string> &languages,
                         std::string_view scorer);
/// `key = value` lines for machine consumption.
std::string FormatKeyValues(const EvalReport &report, std::string_view scorer);

}  // namespace ldvec

#endif  // LDVEC_EVALUATION_H_
