/*
 * ThumbForge Video Thumbnail Library - Clustering
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Seeded k-means++, gap-statistic model selection, subshot identification
 * and stillness-driven keyframe extraction.
 */

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "thumbforge/common.hpp"
#include "thumbforge/descriptors.hpp"
#include "thumbforge/quality_filter.hpp"

namespace thumbforge {

using Points = std::vector<std::vector<double>>;

struct Clustering {
  int k = 0;
  std::vector<int> assignment;            // cluster id per point, in [0,k)
  Points centroids;                       // k vectors
  double inertia = 0.0;                   // pooled within-cluster SSE (W_k)
  std::vector<double> inertia_trace;      // per Lloyd iteration, non-increasing

  std::vector<int> cluster_sizes() const {
    std::vector<int> sizes(k, 0);
    for (const int a : assignment) ++sizes[a];
    return sizes;
  }
};

struct GapResult {
  int k_star = 0;
  int k_min = 0, k_max = 0;
  std::vector<double> gap;          // per candidate k
  std::vector<double> sk;           // standard-error term per k
  std::vector<double> log_wk_data;  // per candidate k
  std::vector<std::vector<double>> log_wk_ref;  // [k][b]
  std::vector<Clustering> clusterings;          // per candidate k, on the data
  bool clamped = false;

  const Clustering& selected() const { return clusterings[k_star - k_min]; }
};

struct Subshot {
  int shot_id = 0;
  int start = 0;  // inclusive frame indices
  int end = 0;
  int cluster_id = 0;
};

namespace detail {

inline Eigen::MatrixXd to_matrix(const Points& points) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  const Eigen::Index d = n ? static_cast<Eigen::Index>(points[0].size()) : 0;
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(points[i].size()) != d)
      throw DimensionMismatch("points have inconsistent dimensions");
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = points[i][j];
  }
  return m;
}

// Squared distances from every point to every centroid via the expansion
// |x-c|^2 = |x|^2 + |c|^2 - 2 x.c; the GEMM carries the bulk of the work.
inline Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x,
                                         const Eigen::VectorXd& x_norms,
                                         const Eigen::MatrixXd& c) {
  Eigen::VectorXd c_norms = c.rowwise().squaredNorm();
  Eigen::MatrixXd d = -2.0 * (x * c.transpose());
  d.colwise() += x_norms;
  d.rowwise() += c_norms.transpose();
  return d.cwiseMax(0.0);
}

}  // namespace detail

// Seeded k-means++ with Lloyd iterations to an assignment fixpoint (max 100
// iterations). Assignment ties break toward the lowest cluster id; an empty
// cluster steals the point farthest from its current centroid.
inline Clustering kmeans(const Points& points, int k, std::uint64_t seed, int max_iter = 100) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw EmptyInput("kmeans: no points");
  if (k < 1 || k > n) throw KTooLarge("kmeans: k=" + std::to_string(k) +
                                      " outside [1, " + std::to_string(n) + "]");
  const Eigen::MatrixXd x = detail::to_matrix(points);
  const Eigen::VectorXd x_norms = x.rowwise().squaredNorm();
  const Eigen::Index dim = x.cols();
  Rng rng(seed);

  // k-means++ seeding.
  Eigen::MatrixXd centroids(k, dim);
  centroids.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_index(n)));
  Eigen::VectorXd best_d2 =
      (x.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = best_d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= best_d2(i);
        if (target <= 0.0) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_index(n));
    }
    centroids.row(c) = x.row(pick);
    best_d2 = best_d2.cwiseMin((x.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }

  Clustering result;
  result.k = k;
  result.assignment.assign(n, 0);
  std::vector<int> prev_assignment(n, -1);
  Eigen::VectorXd point_d2(n);

  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::MatrixXd d2 = detail::squared_distances(x, x_norms, centroids);
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bestv = d2(i, 0);
      for (int c = 1; c < k; ++c) {
        if (d2(i, c) < bestv) {
          bestv = d2(i, c);
          best = c;
        }
      }
      result.assignment[i] = best;
      point_d2(i) = bestv;
    }

    // Repair empty clusters before the update step.
    std::vector<int> sizes(k, 0);
    for (const int a : result.assignment) ++sizes[a];
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      double farv = -1.0;
      for (int i = 0; i < n; ++i) {
        if (sizes[result.assignment[i]] <= 1) continue;
        if (point_d2(i) > farv) {
          farv = point_d2(i);
          far = i;
        }
      }
      if (far < 0) break;
      --sizes[result.assignment[far]];
      result.assignment[far] = c;
      sizes[c] = 1;
      point_d2(far) = 0.0;
    }

    centroids.setZero();
    for (int i = 0; i < n; ++i) centroids.row(result.assignment[i]) += x.row(i);
    for (int c = 0; c < k; ++c)
      if (sizes[c] > 0) centroids.row(c) /= static_cast<double>(sizes[c]);

    double inertia = 0.0;
    for (int i = 0; i < n; ++i)
      inertia += (x.row(i) - centroids.row(result.assignment[i])).squaredNorm();
    result.inertia_trace.push_back(inertia);
    result.inertia = inertia;

    if (result.assignment == prev_assignment) break;
    prev_assignment = result.assignment;
  }

  result.centroids.assign(k, std::vector<double>(dim));
  for (int c = 0; c < k; ++c)
    for (Eigen::Index j = 0; j < dim; ++j) result.centroids[c][j] = centroids(c, j);
  return result;
}

struct GapConfig {
  int k_min = 5;
  int k_max = 10;
  int n_refs = 10;         // B null reference distributions
  int ref_samples = 1000;  // samples per reference distribution
  int threads = 0;
};

// Gap statistic of Tibshirani et al.: Gap(k) = E*[log W_k(ref)] - log W_k,
// references drawn uniformly from the data's per-dimension bounding box.
// k_star is the smallest k with Gap(k) >= Gap(k+1) - s_{k+1}, falling back
// to argmax Gap. A k_max above the point count is clamped, not an error.
inline GapResult gap_statistic(const Points& points, const GapConfig& cfg, std::uint64_t seed) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw EmptyInput("gap_statistic: no points");
  GapResult res;
  res.k_max = std::min(cfg.k_max, n);
  res.k_min = std::min(cfg.k_min, res.k_max);
  res.clamped = res.k_max != cfg.k_max || res.k_min != cfg.k_min;
  const int n_k = res.k_max - res.k_min + 1;
  const std::size_t dim = points[0].size();

  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const auto& p : points) {
    for (std::size_t j = 0; j < dim; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }

  // B reference datasets, shared across all candidate k.
  std::vector<Points> refs(cfg.n_refs);
  for (int b = 0; b < cfg.n_refs; ++b) {
    Rng rng(derive_seed(seed, 0xB00, b));
    refs[b].assign(cfg.ref_samples, std::vector<double>(dim));
    for (int i = 0; i < cfg.ref_samples; ++i)
      for (std::size_t j = 0; j < dim; ++j) refs[b][i][j] = rng.uniform(lo[j], hi[j]);
  }

  res.gap.assign(n_k, 0.0);
  res.sk.assign(n_k, 0.0);
  res.log_wk_data.assign(n_k, 0.0);
  res.log_wk_ref.assign(n_k, std::vector<double>(cfg.n_refs, 0.0));
  res.clusterings.resize(n_k);

  // Every (k, dataset) job is independent and carries its own derived seed,
  // so the merge is deterministic for any thread count.
  const int jobs = n_k * (cfg.n_refs + 1);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const int ki = static_cast<int>(job) / (cfg.n_refs + 1);
    const int slot = static_cast<int>(job) % (cfg.n_refs + 1);
    const int k = res.k_min + ki;
    if (slot == 0) {
      Clustering c = kmeans(points, std::min(k, n), derive_seed(seed, k, 0xDA7A));
      res.log_wk_data[ki] = std::log(c.inertia + 1e-12);
      res.clusterings[ki] = std::move(c);
    } else {
      const int b = slot - 1;
      const Clustering c =
          kmeans(refs[b], std::min(k, cfg.ref_samples), derive_seed(seed, k, b));
      res.log_wk_ref[ki][b] = std::log(c.inertia + 1e-12);
    }
  });

  for (int ki = 0; ki < n_k; ++ki) {
    double mean = 0.0;
    for (const double v : res.log_wk_ref[ki]) mean += v;
    mean /= cfg.n_refs;
    double var = 0.0;
    for (const double v : res.log_wk_ref[ki]) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / cfg.n_refs);
    res.gap[ki] = mean - res.log_wk_data[ki];
    res.sk[ki] = sd * std::sqrt(1.0 + 1.0 / cfg.n_refs);
  }

  res.k_star = 0;
  for (int ki = 0; ki + 1 < n_k; ++ki) {
    if (res.gap[ki] >= res.gap[ki + 1] - res.sk[ki + 1]) {
      res.k_star = res.k_min + ki;
      break;
    }
  }
  if (res.k_star == 0) {
    int best = 0;
    for (int ki = 1; ki < n_k; ++ki)
      if (res.gap[ki] > res.gap[best]) best = ki;
    res.k_star = res.k_min + best;
  }
  return res;
}

// Clusters the kept-frame descriptors with k = number of shots and cuts each
// shot into maximal runs of identical cluster id.
inline std::vector<Subshot> segment_subshots(const FrameMask& mask,
                                             const std::vector<FrameDescriptor>& descriptors,
                                             std::uint64_t seed) {
  if (mask.shots.empty()) throw EmptyInput("segment_subshots: mask has no shots");

  std::vector<int> kept;  // frame indices, ascending
  std::vector<int> position(mask.keep.size(), -1);
  for (std::size_t i = 0; i < mask.keep.size(); ++i) {
    if (mask.keep[i]) {
      position[i] = static_cast<int>(kept.size());
      kept.push_back(static_cast<int>(i));
    }
  }
  std::vector<int> desc_of_frame(mask.keep.size(), -1);
  for (std::size_t d = 0; d < descriptors.size(); ++d) {
    const int idx = descriptors[d].index;
    if (idx >= 0 && idx < static_cast<int>(desc_of_frame.size()))
      desc_of_frame[idx] = static_cast<int>(d);
  }
  Points pts;
  pts.reserve(kept.size());
  for (const int f : kept) {
    if (desc_of_frame[f] < 0)
      throw DimensionMismatch("missing descriptor for kept frame " + std::to_string(f));
    pts.push_back(descriptors[desc_of_frame[f]].vector);
  }

  const int k = std::max(1, std::min<int>(static_cast<int>(mask.shots.size()),
                                          static_cast<int>(pts.size())));
  const Clustering clustering = kmeans(pts, k, seed);

  std::vector<Subshot> subshots;
  for (std::size_t s = 0; s < mask.shots.size(); ++s) {
    const auto [lo, hi] = mask.shots[s];
    int run_start = lo;
    int run_cluster = clustering.assignment[position[lo]];
    for (int i = lo + 1; i <= hi + 1; ++i) {
      const int cid = i <= hi ? clustering.assignment[position[i]] : -1;
      if (cid != run_cluster) {
        subshots.push_back({static_cast<int>(s), run_start, i - 1, run_cluster});
        run_start = i;
        run_cluster = cid;
      }
    }
  }
  return subshots;
}

// One keyframe per subshot: the most still frame, ties to the lowest index.
inline std::vector<int> extract_keyframes(const std::vector<Subshot>& subshots,
                                          const std::vector<double>& stillness) {
  std::vector<int> keyframes;
  keyframes.reserve(subshots.size());
  for (const auto& ss : subshots) {
    int best = ss.start;
    for (int i = ss.start + 1; i <= ss.end; ++i)
      if (stillness[i] > stillness[best]) best = i;
    keyframes.push_back(best);
  }
  return keyframes;
}

}  // namespace thumbforge
