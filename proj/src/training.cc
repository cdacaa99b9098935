// ldvec/training.cc

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

#include "ldvec/training.h"

#include <cmath>
#include <limits>

namespace ldvec {

void TrainConfig::Validate() const {
  Require(max_iters >= 1, ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  Require(rel_tol > 0.0, ErrorCode::kInvalidArgument, "rel_tol must be > 0");
  Require(min_eig_floor > 0.0, ErrorCode::kInvalidArgument, "min_eig_floor must be > 0");
}

std::vector<int> RequireLabels(const StatsDataset &dataset) {
  std::vector<int> labels;
  labels.reserve(dataset.size());
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    Require(dataset.segments[s].label.has_value(), ErrorCode::kMissingLabel,
            "training segment " + std::to_string(s) + " has no language label");
    labels.push_back(*dataset.segments[s].label);
  }
  return labels;
}

std::vector<PosteriorPair> EStep(const StatsDataset &dataset, const Backend &backend,
                                 const TMatrix &t, int workers) {
  RequireLabels(dataset);
  std::vector<PosteriorPair> out(dataset.size());
  ParallelFor(dataset.size(), workers, [&](std::size_t s) {
    out[s] = ComputePosterior(dataset.segments[s], backend, t);
  });
  return out;
}

MatrixXd MStepMeans(const std::vector<PosteriorPair> &posteriors,
                    const std::vector<int> &labels, int num_languages) {
  Require(posteriors.size() == labels.size() && !posteriors.empty(),
          ErrorCode::kShapeMismatch, "one label per posterior required");
  const Eigen::Index r = posteriors[0].cov.rows();
  MatrixXd sums = MatrixXd::Zero(num_languages, r);
  std::vector<int> counts(num_languages, 0);
  for (std::size_t s = 0; s < posteriors.size(); ++s) {
    int l = labels[s];
    Require(l >= 0 && l < num_languages, ErrorCode::kLabelOutOfRange, "label out of range");
    sums.row(l) += posteriors[s].means.row(l);
    ++counts[l];
  }
  for (int l = 0; l < num_languages; ++l) {
    Require(counts[l] > 0, ErrorCode::kEmptyClass,
            "language " + std::to_string(l) + " has no segments");
    sums.row(l) /= counts[l];
  }
  return sums;
}

MatrixXd MStepPrecision(const std::vector<PosteriorPair> &posteriors,
                        const std::vector<int> &labels, const MatrixXd &class_means,
                        double floor) {
  Require(posteriors.size() == labels.size() && !posteriors.empty(),
          ErrorCode::kShapeMismatch, "one label per posterior required");
  const Eigen::Index r = class_means.cols();
  MatrixXd cov_sum = MatrixXd::Zero(r, r), scatter = MatrixXd::Zero(r, r);
  for (std::size_t s = 0; s < posteriors.size(); ++s) {
    int l = labels[s];
    VectorXd dev = (posteriors[s].means.row(l) - class_means.row(l)).transpose();
    cov_sum += posteriors[s].cov;
    scatter.noalias() += dev * dev.transpose();
  }
  const double count = static_cast<double>(posteriors.size());
  MatrixXd w_inv = FloorEigenvalues(Symmetrize((cov_sum + scatter) / count), floor);
  return SpdInverse(Cholesky(w_inv, "W^{-1}"));
}

double LowerBound(const VectorXd &a, const MatrixXd &b, const PosteriorPair &pp, int lang,
                  const Backend &backend) {
  Require(lang >= 0 && lang < backend.num_languages(), ErrorCode::kLabelOutOfRange,
          "language index out of range");
  const MatrixXd &w = backend.precision;
  const MatrixXd &c = pp.cov;
  const double r = static_cast<double>(w.rows());
  VectorXd mu = pp.mean(lang);
  VectorXd dev = mu - backend.means.row(lang).transpose();

  double log_det_w = LogDet(Cholesky(w, "W"));
  double log_det_c = LogDet(Cholesky(Symmetrize(c), "posterior covariance"));
  double prior = 0.5 * log_det_w - 0.5 * (w.cwiseProduct(c).sum() + dev.dot(w * dev));
  double entropy = 0.5 * log_det_c + 0.5 * r;
  double likelihood = a.dot(mu) - 0.5 * (b.cwiseProduct(c).sum() + mu.dot(b * mu));
  return prior + entropy + likelihood;
}

double LowerBound(const SegmentStats &stats, const PosteriorPair &pp, int lang,
                  const Backend &backend, const TMatrix &t) {
  return LowerBound(stats.a, PrecisionTerm(stats.n, t), pp, lang, backend);
}

double TotalBound(const StatsDataset &dataset, const std::vector<PosteriorPair> &posteriors,
                  const Backend &backend, const TMatrix &t) {
  Require(posteriors.size() == dataset.size(), ErrorCode::kShapeMismatch,
          "one posterior per segment required");
  std::vector<int> labels = RequireLabels(dataset);
  double total = 0.0;
  for (std::size_t s = 0; s < dataset.size(); ++s)
    total += LowerBound(dataset.segments[s], posteriors[s], labels[s], backend, t);
  return total;
}

Backend InitialBackend(const StatsDataset &dataset, const TMatrix &t) {
  dataset.Validate();
  std::vector<int> labels = RequireLabels(dataset);
  const int l = dataset.num_languages(), r = t.ivector_dim();
  Require(l >= 1, ErrorCode::kEmptyClass, "training data declares no languages");
  MatrixXd sums = MatrixXd::Zero(l, r);
  std::vector<int> counts(l, 0);
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    sums.row(labels[s]) += ComputeClassicalIvector(dataset.segments[s], t).mean.transpose();
    ++counts[labels[s]];
  }
  for (int k = 0; k < l; ++k) {
    Require(counts[k] > 0, ErrorCode::kEmptyClass,
            "language " + dataset.languages[k] + " has no segments");
    sums.row(k) /= counts[k];
  }
  return Backend{sums, MatrixXd::Identity(r, r), dataset.languages};
}

Backend EmIteration(const StatsDataset &dataset, const Backend &backend, const TMatrix &t,
                    const TrainConfig &cfg) {
  std::vector<int> labels = RequireLabels(dataset);
  std::vector<PosteriorPair> post = EStep(dataset, backend, t, cfg.workers);
  Backend next = backend;
  next.means = MStepMeans(post, labels, backend.num_languages());
  next.precision = MStepPrecision(post, labels, next.means, cfg.min_eig_floor);
  return next;
}

std::pair<Backend, TrainReport> Train(const StatsDataset &dataset, const TMatrix &t,
                                      const TrainConfig &cfg) {
  cfg.Validate();
  Backend backend = InitialBackend(dataset, t);
  std::vector<int> labels = RequireLabels(dataset);
  TrainReport report;

  std::vector<PosteriorPair> post = EStep(dataset, backend, t, cfg.workers);
  double prev = TotalBound(dataset, post, backend, t);
  report.initial_bound = prev;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    backend.means = MStepMeans(post, labels, backend.num_languages());
    backend.precision = MStepPrecision(post, labels, backend.means, cfg.min_eig_floor);
    post = EStep(dataset, backend, t, cfg.workers);
    double bound = TotalBound(dataset, post, backend, t);
    report.bounds.push_back(bound);
    report.iters_run = iter + 1;
    if (bound < prev - 1e-8 * (1.0 + std::abs(prev))) report.monotone = false;
    double gain = (bound - prev) / std::max(std::abs(prev), std::numeric_limits<double>::min());
    prev = bound;
    if (gain < cfg.rel_tol) {
      report.converged = true;
      break;
    }
  }
  return {backend, report};
}

}  // namespace ldvec
