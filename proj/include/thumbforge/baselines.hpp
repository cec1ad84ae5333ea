/*
 * ThumbForge Video Thumbnail Library - Baseline selectors
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Random, k-means centroid, k-means stillness, group-LASSO sparse dictionary
 * selection and beauty-rank baselines. Baselines skip the frame filtering
 * and keyframe extraction of the main pipeline.
 */

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "thumbforge/aesthetics.hpp"
#include "thumbforge/clustering.hpp"
#include "thumbforge/common.hpp"
#include "thumbforge/descriptors.hpp"
#include "thumbforge/scoring.hpp"

namespace thumbforge {

// Uniform sample of k distinct frame indices, in selection order.
inline std::vector<int> baseline_random(int n_frames, int k, std::uint64_t seed) {
  if (k > n_frames) throw KTooLarge("baseline_random: k > n_frames");
  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(n_frames, k);
  std::vector<int> out(picks.begin(), picks.end());
  return out;
}

namespace detail {

struct ClusterPick {
  int frame_index;
  int cluster_size;
};

// Shared tail of the two k-means baselines: gap-statistic clustering over
// all descriptors, one pick per cluster, ranked by cluster size (ties to the
// lower frame index). `better(i, best, c, clustering)` decides the per-cluster
// pick; candidates are visited in ascending frame order, so a strict
// comparison keeps the lowest index on ties.
template <typename BetterFn>
std::vector<int> kmeans_baseline(const std::vector<FrameDescriptor>& descriptors,
                                 const GapConfig& gap_cfg, std::uint64_t seed,
                                 BetterFn&& better) {
  if (descriptors.empty()) throw EmptyInput("kmeans baseline: no descriptors");
  Points pts;
  pts.reserve(descriptors.size());
  for (const auto& d : descriptors) pts.push_back(d.vector);
  const GapResult gap = gap_statistic(pts, gap_cfg, seed);
  const Clustering& clustering = gap.selected();

  std::vector<ClusterPick> picks;
  for (int c = 0; c < clustering.k; ++c) {
    int best = -1;
    int size = 0;
    for (std::size_t i = 0; i < descriptors.size(); ++i) {
      if (clustering.assignment[i] != c) continue;
      ++size;
      if (best < 0 || better(i, static_cast<std::size_t>(best), c, clustering))
        best = static_cast<int>(i);
    }
    if (best < 0) continue;
    picks.push_back({descriptors[best].index, size});
  }
  std::stable_sort(picks.begin(), picks.end(), [](const ClusterPick& a, const ClusterPick& b) {
    if (a.cluster_size != b.cluster_size) return a.cluster_size > b.cluster_size;
    return a.frame_index < b.frame_index;
  });
  std::vector<int> out;
  out.reserve(picks.size());
  for (const auto& p : picks) out.push_back(p.frame_index);
  return out;
}

inline double point_centroid_dist2(const std::vector<double>& p, const std::vector<double>& c) {
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double d = p[j] - c[j];
    sum += d * d;
  }
  return sum;
}

}  // namespace detail

// One frame per cluster, the one closest to the centroid.
inline std::vector<int> baseline_kmeans_centroid(const std::vector<FrameDescriptor>& descriptors,
                                                 std::uint64_t seed,
                                                 const GapConfig& gap_cfg = {}) {
  return detail::kmeans_baseline(
      descriptors, gap_cfg, seed,
      [&](std::size_t i, std::size_t best, int c, const Clustering& clustering) {
        return detail::point_centroid_dist2(descriptors[i].vector, clustering.centroids[c]) <
               detail::point_centroid_dist2(descriptors[best].vector, clustering.centroids[c]);
      });
}

// One frame per cluster, the most still one.
inline std::vector<int> baseline_kmeans_stillness(const std::vector<FrameDescriptor>& descriptors,
                                                  const std::vector<double>& stillness_by_frame,
                                                  std::uint64_t seed,
                                                  const GapConfig& gap_cfg = {}) {
  return detail::kmeans_baseline(
      descriptors, gap_cfg, seed,
      [&](std::size_t i, std::size_t best, int /*c*/, const Clustering& /*clustering*/) {
        return stillness_by_frame[descriptors[i].index] >
               stillness_by_frame[descriptors[best].index];
      });
}

// ---------------------------------------------------------------------------
// Group LASSO: min_A |X - XA|_F^2 + (lambda/2) |A|_{2,1}
// ---------------------------------------------------------------------------

struct GroupLassoConfig {
  int max_iter = 5000;
  double rel_tol = 1e-6;          // stop when the objective change is below this
  double nonconverged_tol = 1e-4; // flag when the cap is hit above this
};

struct SparseCoefficients {
  Eigen::MatrixXd a;                   // n x n coefficients
  double lambda = 0.0;
  std::vector<double> objective_trace; // non-increasing
  std::vector<double> row_scores;      // s_i = |A_{i,:}|_2
  bool converged = true;
};

// Proximal gradient with a fixed 1/L step, L = 2 sigma_max(X^T X), starting
// from A = 0: a gradient step on the smooth term, then a row-wise group
// soft-threshold. Returns the best iterate when the iteration cap is hit.
inline SparseCoefficients group_lasso_scores(const Eigen::MatrixXd& x, double lambda,
                                             const GroupLassoConfig& cfg = {}) {
  if (x.cols() < 1) throw EmptyInput("group_lasso: empty matrix");
  if (lambda < 0.0) throw InvalidTrainingData("group_lasso: lambda must be >= 0");
  const Eigen::Index n = x.cols();
  const Eigen::MatrixXd gram = x.transpose() * x;  // n x n

  // Largest eigenvalue of the PSD Gram matrix via power iteration, padded
  // by 1% so the step stays below 1/L and the descent property holds.
  double sigma_max = 0.0;
  {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd w = gram * v;
      const double norm = w.norm();
      if (norm <= 0.0) break;
      w /= norm;
      const double estimate = w.dot(gram * w);
      if (std::abs(estimate - sigma_max) <= 1e-12 * std::max(1.0, estimate)) {
        sigma_max = estimate;
        break;
      }
      sigma_max = estimate;
      v = w;
    }
  }
  const double lipschitz = 2.0 * sigma_max * 1.01;

  SparseCoefficients res;
  res.lambda = lambda;
  res.a = Eigen::MatrixXd::Zero(n, n);

  const auto objective = [&](const Eigen::MatrixXd& a) {
    const double fit = (x - x * a).squaredNorm();
    double rows = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) rows += a.row(i).norm();
    return fit + 0.5 * lambda * rows;
  };

  double prev_obj = objective(res.a);
  res.objective_trace.push_back(prev_obj);
  if (lipschitz <= 0.0) {  // X == 0: A = 0 is optimal
    res.row_scores.assign(n, 0.0);
    return res;
  }
  const double step = 1.0 / lipschitz;
  const double shrink = 0.5 * lambda * step;

  Eigen::MatrixXd a_next(n, n);
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    // grad = 2 (G A - G)
    a_next = res.a - (2.0 * step) * (gram * res.a - gram);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double norm = a_next.row(i).norm();
      if (norm <= shrink)
        a_next.row(i).setZero();
      else
        a_next.row(i) *= (norm - shrink) / norm;
    }
    res.a.swap(a_next);
    const double obj = objective(res.a);
    res.objective_trace.push_back(obj);
    const double rel_change = std::abs(prev_obj - obj) / std::max(1e-12, std::abs(prev_obj));
    prev_obj = obj;
    if (rel_change < cfg.rel_tol) break;
    if (iter == cfg.max_iter - 1 && rel_change > cfg.nonconverged_tol) res.converged = false;
  }

  res.row_scores.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) res.row_scores[i] = res.a.row(i).norm();
  return res;
}

// Frames ranked by the representativeness score s_i, descending, ties to the
// lower frame index. Inputs above 2,000 frames are stride-5 subsampled to
// bound the n x n coefficient matrix.
inline std::vector<int> baseline_glasso(const std::vector<FrameDescriptor>& descriptors,
                                        double lambda, const GroupLassoConfig& cfg = {}) {
  if (descriptors.empty()) throw EmptyInput("glasso baseline: no descriptors");
  std::vector<const FrameDescriptor*> used;
  if (descriptors.size() > 2000) {
    for (std::size_t i = 0; i < descriptors.size(); i += 5) used.push_back(&descriptors[i]);
  } else {
    for (const auto& d : descriptors) used.push_back(&d);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(used.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(used[0]->vector.size());
  Eigen::MatrixXd x(dim, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) x(i, j) = used[j]->vector[i];

  const SparseCoefficients coeffs = group_lasso_scores(x, lambda, cfg);
  std::vector<int> order(used.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (coeffs.row_scores[a] != coeffs.row_scores[b])
      return coeffs.row_scores[a] > coeffs.row_scores[b];
    return used[a]->index < used[b]->index;
  });
  std::vector<int> out;
  out.reserve(order.size());
  for (const int i : order) out.push_back(used[i]->index);
  return out;
}

// Scores every fifth frame with the supervised engine and ranks by score.
// Faithful to the original method, near-duplicates are not removed.
inline std::vector<int> baseline_beauty_rank(const std::vector<Frame>& frames,
                                             const ForestModel& model,
                                             const SpectrumPrior& prior, int threads = 0) {
  if (frames.empty()) throw EmptyInput("beauty baseline: no frames");
  std::vector<std::size_t> stride_ids;
  for (std::size_t i = 0; i < frames.size(); i += 5) stride_ids.push_back(i);
  std::vector<double> scores(stride_ids.size());
  parallel_for(stride_ids.size(), threads, [&](std::size_t j) {
    const AestheticVector av = compute_aesthetic_vector(frames[stride_ids[j]], prior);
    scores[j] = model.predict(av.vector);
  });
  std::vector<int> order(stride_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return stride_ids[a] < stride_ids[b];
  });
  std::vector<int> out;
  out.reserve(order.size());
  for (const int i : order) out.push_back(frames[stride_ids[i]].index);
  return out;
}

}  // namespace thumbforge
