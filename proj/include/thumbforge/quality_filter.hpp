/*
 * ThumbForge Video Thumbnail Library - Frame quality filtering
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Scores dark / blurry / uniform frames and removes frames around shot
 * boundaries detected via the edge change ratio of Zabih et al.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "thumbforge/common.hpp"
#include "thumbforge/frame_io.hpp"
#include "thumbforge/image_ops.hpp"

namespace thumbforge {

struct FrameQuality {
  int index = 0;
  double luminance = 0.0;   // mean relative luminance, [0,1]
  double sharpness = 0.0;   // mean gradient magnitude, >= 0
  double uniformity = 0.0;  // top-bin histogram mass, [0,1]
};

struct FilterConfig {
  double luminance_min = 0.10;
  double sharpness_min = 0.02;
  double uniformity_max = 0.95;
  double ecr_threshold = 0.5;
  int boundary_margin = 3;      // frames dropped on each side of a cut
  double ecr_edge_threshold = 0.1;  // gradient magnitude that counts as an edge
  int ecr_dilate_radius = 2;
};

struct FrameMask {
  std::vector<char> keep;                     // per frame index
  std::vector<std::pair<int, int>> shots;     // inclusive spans of kept runs
  bool filters_disabled = false;              // set by the pipeline fallback

  int kept_count() const {
    return static_cast<int>(std::count(keep.begin(), keep.end(), char(1)));
  }
};

// Mean relative luminance (dark-frame score).
inline double luminance_score(const Frame& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.pixels(); ++i) {
    const float* p = &f.rgb[i * 3];
    sum += kLumaR * p[0] + kLumaG * p[1] + kLumaB * p[2];
  }
  return f.pixels() ? sum / static_cast<double>(f.pixels()) : 0.0;
}

// Mean gradient magnitude (blur score).
inline double sharpness_score(const GrayFrame& g) {
  if (g.width < 3 || g.height < 3) throw FrameTooSmall("sharpness needs at least 3x3");
  const GradientField grad = compute_gradients(g);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.pixels(); ++i) sum += grad.mag(i);
  return sum / static_cast<double>(g.pixels());
}

// Mass of the top 5% histogram bins (uniform-color score): 256 bins,
// descending sort, sum of the largest ceil(0.05*256) = 13 bins.
inline double uniformity_score(const GrayFrame& g) {
  std::vector<double> hist = intensity_histogram(g.gray, 256);
  std::sort(hist.begin(), hist.end(), std::greater<double>());
  const int top = 13;
  return std::accumulate(hist.begin(), hist.begin() + top, 0.0);
}

inline std::vector<char> edge_map(const GradientField& grad, double threshold) {
  std::vector<char> edges(grad.gx.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = grad.mag(i) > threshold ? 1 : 0;
  return edges;
}

// Edge change ratio: max of the outgoing and incoming edge fractions after
// dilating each map. Returns 0 when both frames are edge-free.
inline double edge_change_ratio(const GrayFrame& prev, const GrayFrame& cur,
                                const FilterConfig& cfg = {}) {
  if (prev.width != cur.width || prev.height != cur.height)
    throw DimensionMismatch("edge_change_ratio: frame sizes differ");
  const std::vector<char> ep = edge_map(compute_gradients(prev), cfg.ecr_edge_threshold);
  const std::vector<char> ec = edge_map(compute_gradients(cur), cfg.ecr_edge_threshold);
  const std::vector<char> dp = dilate(ep, prev.width, prev.height, cfg.ecr_dilate_radius);
  const std::vector<char> dc = dilate(ec, cur.width, cur.height, cfg.ecr_dilate_radius);
  std::size_t np = 0, nc = 0, out = 0, in = 0;
  for (std::size_t i = 0; i < ep.size(); ++i) {
    np += ep[i];
    nc += ec[i];
    out += ep[i] && !dc[i];
    in += ec[i] && !dp[i];
  }
  const double frac_out = np ? static_cast<double>(out) / np : 0.0;
  const double frac_in = nc ? static_cast<double>(in) / nc : 0.0;
  return std::max(frac_out, frac_in);
}

// ecr[i] is the change between frames i-1 and i; ecr[0] = 0.
inline std::vector<double> ecr_series(const std::vector<GrayFrame>& grays,
                                      const FilterConfig& cfg = {}) {
  std::vector<double> ecr(grays.size(), 0.0);
  if (grays.size() < 2) return ecr;
  parallel_for(grays.size() - 1, 0, [&](std::size_t i) {
    ecr[i + 1] = edge_change_ratio(grays[i], grays[i + 1], cfg);
  });
  return ecr;
}

// A boundary index i marks a cut between frames i-1 and i. Runs of adjacent
// over-threshold indices collapse to the local ECR maximum.
inline std::vector<int> detect_shot_boundaries(const std::vector<double>& ecr,
                                               double ecr_threshold) {
  std::vector<int> boundaries;
  const int n = static_cast<int>(ecr.size());
  int i = 1;
  while (i < n) {
    if (ecr[i] <= ecr_threshold) {
      ++i;
      continue;
    }
    int best = i;
    int j = i;
    while (j < n && ecr[j] > ecr_threshold) {
      if (ecr[j] > ecr[best]) best = j;
      ++j;
    }
    boundaries.push_back(best);
    i = j;
  }
  return boundaries;
}

inline std::vector<int> detect_shot_boundaries(const std::vector<GrayFrame>& grays,
                                               const FilterConfig& cfg = {}) {
  return detect_shot_boundaries(ecr_series(grays, cfg), cfg.ecr_threshold);
}

inline std::vector<FrameQuality> compute_quality(const std::vector<Frame>& frames,
                                                 const std::vector<GrayFrame>& grays) {
  std::vector<FrameQuality> q(frames.size());
  parallel_for(frames.size(), 0, [&](std::size_t i) {
    q[i].index = frames[i].index;
    q[i].luminance = luminance_score(frames[i]);
    q[i].sharpness = sharpness_score(grays[i]);
    q[i].uniformity = uniformity_score(grays[i]);
  });
  return q;
}

namespace detail {

inline FrameMask build_mask(std::size_t n, const std::vector<FrameQuality>& quality,
                            const std::vector<int>& boundaries, const FilterConfig& cfg,
                            bool apply_thresholds, bool apply_margin) {
  FrameMask mask;
  mask.keep.assign(n, 1);
  if (apply_thresholds) {
    for (std::size_t i = 0; i < n; ++i) {
      const FrameQuality& q = quality[i];
      if (q.luminance < cfg.luminance_min || q.sharpness < cfg.sharpness_min ||
          q.uniformity > cfg.uniformity_max)
        mask.keep[i] = 0;
    }
  }
  if (apply_margin) {
    // A boundary b sits between frames b-1 and b; drop margin frames on
    // each side of the cut: [b - margin, b + margin - 1].
    for (const int b : boundaries) {
      const int lo = std::max(0, b - cfg.boundary_margin);
      const int hi = std::min(static_cast<int>(n) - 1, b + cfg.boundary_margin - 1);
      for (int i = lo; i <= hi; ++i) mask.keep[i] = 0;
    }
  }
  // Shot spans are the contiguous runs of kept frames, but never spanning a
  // detected cut (relevant when boundary_margin is 0).
  std::vector<char> is_cut(n + 1, 0);
  for (const int b : boundaries)
    if (b >= 0 && b <= static_cast<int>(n)) is_cut[b] = 1;
  int start = -1;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool kept = i < n && mask.keep[i];
    const bool breaks = i == n || !kept || (start >= 0 && is_cut[i]);
    if (breaks && start >= 0) {
      mask.shots.emplace_back(start, static_cast<int>(i) - 1);
      start = -1;
    }
    if (kept && start < 0) start = static_cast<int>(i);
  }
  return mask;
}

}  // namespace detail

// Applies the scalar thresholds and the boundary margin; throws
// AllFramesFiltered so the caller can fall back to unfiltered frames.
inline FrameMask filter_frames(const std::vector<FrameQuality>& quality,
                               const std::vector<int>& boundaries, std::size_t n_frames,
                               const FilterConfig& cfg) {
  FrameMask mask = detail::build_mask(n_frames, quality, boundaries, cfg, true, true);
  if (mask.shots.empty()) throw AllFramesFiltered("no frame survived the quality filter");
  return mask;
}

inline FrameMask filter_frames(const std::vector<Frame>& frames, const FilterConfig& cfg = {}) {
  if (frames.empty()) throw EmptyStream("filter_frames: no frames");
  std::vector<GrayFrame> grays(frames.size());
  parallel_for(frames.size(), 0, [&](std::size_t i) { grays[i] = to_gray(frames[i]); });
  const auto quality = compute_quality(frames, grays);
  const auto boundaries = detect_shot_boundaries(grays, cfg);
  return filter_frames(quality, boundaries, frames.size(), cfg);
}

}  // namespace thumbforge
