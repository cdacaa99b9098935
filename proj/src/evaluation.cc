// ldvec/evaluation.cc

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

#include "ldvec/evaluation.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ldvec {

namespace {

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

EvalReport Evaluate(const MatrixXd &scores, const std::vector<std::optional<int>> &labels) {
  const auto s = scores.rows();
  const int l = static_cast<int>(scores.cols());
  Require(s >= 1 && l >= 1, ErrorCode::kZeroDimension, "empty score matrix");
  Require(static_cast<Eigen::Index>(labels.size()) == s, ErrorCode::kShapeMismatch,
          "one label per score row required");
  Require(scores.allFinite(), ErrorCode::kNonFinite, "scores must be finite");

  EvalReport report;
  report.num_segments = static_cast<std::size_t>(s);
  report.confusion = Eigen::MatrixXi::Zero(l, l);
  double correct = 0.0, loss = 0.0;
  for (Eigen::Index row = 0; row < s; ++row) {
    Require(labels[row].has_value(), ErrorCode::kMissingLabel,
            "score row " + std::to_string(row) + " has no label");
    int truth = *labels[row];
    Require(truth >= 0 && truth < l, ErrorCode::kLabelOutOfRange, "label out of range");
    int best = 0;
    for (int k = 1; k < l; ++k)
      if (scores(row, k) > scores(row, best)) best = k;
    ++report.confusion(truth, best);
    if (best == truth) correct += 1.0;
    double max = scores(row, best);
    double log_norm = max + std::log((scores.row(row).array() - max).exp().sum());
    loss += log_norm - scores(row, truth);
  }
  report.accuracy = correct / static_cast<double>(s);
  report.log_loss = loss / static_cast<double>(s);
  return report;
}

EvalReport Evaluate(const ScoreMatrix &scores) { return Evaluate(scores.scores, scores.labels); }

std::string FormatReport(const EvalReport &report, const std::vector<std::string> &languages,
                         std::string_view scorer) {
  std::ostringstream os;
  os << "scorer     " << scorer << "\n";
  os << "segments   " << report.num_segments << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", report.accuracy);
  os << "accuracy   " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", report.log_loss);
  os << "log_loss   " << buf << "\n";
  os << "confusion (rows = truth, columns = decision)\n";
  const int l = static_cast<int>(report.confusion.rows());
  auto name = [&](int k) {
    return k < static_cast<int>(languages.size()) ? languages[k] : std::to_string(k);
  };
  os << "          ";
  for (int c = 0; c < l; ++c) {
    std::snprintf(buf, sizeof(buf), " %8s", name(c).c_str());
    os << buf;
  }
  os << "\n";
  for (int r = 0; r < l; ++r) {
    std::snprintf(buf, sizeof(buf), "%-10s", name(r).c_str());
    os << buf;
    for (int c = 0; c < l; ++c) {
      std::snprintf(buf, sizeof(buf), " %8d", report.confusion(r, c));
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

std::string FormatKeyValues(const EvalReport &report, std::string_view scorer) {
  std::ostringstream os;
  os << "scorer = " << scorer << "\n";
  os << "segments = " << report.num_segments << "\n";
  os << "accuracy = " << Num(report.accuracy) << "\n";
  os << "log_loss = " << Num(report.log_loss) << "\n";
  os << "languages = " << report.confusion.rows() << "\n";
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    os << "confusion." << r << " =";
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) os << " " << report.confusion(r, c);
    os << "\n";
  }
  return os.str();
}

}  // namespace ldvec
