// ldvec/scoring.h

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

#ifndef LDVEC_SCORING_H_
#define LDVEC_SCORING_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldvec/posterior.h"

namespace ldvec {

// All scores are defined up to a per-segment constant shared by every
// language: only differences across languages within a row carry meaning,
// and absolute values of different scorers are not comparable.

enum class ScorerKind { kLd, kCpf, kLgbe };

std::string_view ScorerName(ScorerKind kind);
/// Throws kInvalidArgument for names other than ld, cpf, lgbe.
ScorerKind ParseScorer(std::string_view name);

/// Language-dependent posterior score, with C = (W + B)^{-1}:
///
///   sigma_l = -1/2 m_l'(W - W C W) m_l + m_l' W C a
///
/// Identically zero for a segment with no frames.
VectorXd LdScore(const SegmentStats &stats, const Backend &backend, const TMatrix &t);
VectorXd LdScore(const VectorXd &a, const MatrixXd &b, const Backend &backend);

/// Score under the language-independent standard-normal posterior, with
/// E = I + B and Ct = (W + E)^{-1}:
///
///   sigma_l = -1/2 m_l' W Ct E m_l + m_l' W Ct a
VectorXd CpfScore(const SegmentStats &stats, const Backend &backend, const TMatrix &t);
VectorXd CpfScore(const VectorXd &a, const MatrixXd &b, const Backend &backend);

/// Linear Gaussian backend on a point estimate: -1/2 m_l'W m_l + m_l'W ivec.
VectorXd LgbeScore(const ClassicalIvector &ivec, const Backend &backend);

struct ScoreMatrix {
  MatrixXd scores;  // S x L
  ScorerKind kind = ScorerKind::kLd;
  std::vector<std::optional<int>> labels;
  std::vector<std::string> languages;
};

ScoreMatrix ScoreDataset(const StatsDataset &dataset, const Backend &backend,
                         const TMatrix &t, ScorerKind kind, int workers = 1);

/// Rebuilds a = (I + B) ivec per segment, then scores as ScoreDataset.
ScoreMatrix ScoreFromIvectors(const IvectorSet &ivectors, const Backend &backend,
                              const TMatrix &t, ScorerKind kind, int workers = 1);

// Manifest kind=scores: keys S, L, scorer, labels; arrays scores (S x L),
// labels (S, -1 for unlabeled).
void SaveScores(const ScoreMatrix &scores, const std::filesystem::path &manifest,
                const std::string &subdir = "");
ScoreMatrix LoadScores(const std::filesystem::path &manifest);

}  // namespace ldvec

#endif  // LDVEC_SCORING_H_
