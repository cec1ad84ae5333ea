/*
 * ThumbForge Video Thumbnail Library - Thumbnail selection pipeline
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Orchestrates filtering, keyframe extraction and cluster-ranked thumbnail
 * selection into the end-to-end pipeline.
 */

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "thumbforge/aesthetics.hpp"
#include "thumbforge/clustering.hpp"
#include "thumbforge/common.hpp"
#include "thumbforge/descriptors.hpp"
#include "thumbforge/frame_io.hpp"
#include "thumbforge/quality_filter.hpp"
#include "thumbforge/scoring.hpp"

namespace thumbforge {

struct SelectionConfig {
  ScoreMode mode = ScoreMode::unsupervised_stillness;
  int k_output = 5;
  std::uint64_t seed = 42;
  FilterConfig filter;
  GapConfig gap;
  int threads = 0;
};

struct ThumbnailCandidate {
  int frame_index = 0;
  double timestamp = 0.0;
  int cluster_id = 0;
  int cluster_size = 0;       // keyframes in the cluster
  double attractiveness = 0.0;
  int rank = 0;               // 1-based, no gaps
};

struct PipelineReport {
  int frames_total = 0;
  int frames_after_filter = 0;
  int keyframes = 0;
  int clusters = 0;
  double video_duration = 0.0;                 // seconds
  std::map<std::string, double> wall_time;     // per stage, seconds
  bool filters_disabled = false;               // all-frames-filtered fallback fired
  bool gap_skipped = false;                    // too few keyframes for the gap search
};

struct SelectionResult {
  std::vector<ThumbnailCandidate> candidates;  // every cluster, ranked
  PipelineReport report;

  std::vector<ThumbnailCandidate> top(int k) const {
    std::vector<ThumbnailCandidate> out(candidates.begin(),
                                        candidates.begin() + std::min<std::size_t>(k, candidates.size()));
    return out;
  }
};

// One candidate per cluster: the highest-scoring keyframe (ties to the lower
// frame index), ranked by cluster size, then attractiveness, then index.
inline std::vector<ThumbnailCandidate> rank_candidates(
    const std::vector<int>& keyframes, const std::vector<int>& cluster_of_keyframe,
    int n_clusters, const std::vector<double>& keyframe_scores,
    const std::vector<double>& timestamp_by_frame) {
  std::vector<ThumbnailCandidate> out;
  for (int c = 0; c < n_clusters; ++c) {
    int best = -1;
    int size = 0;
    for (std::size_t i = 0; i < keyframes.size(); ++i) {
      if (cluster_of_keyframe[i] != c) continue;
      ++size;
      if (best < 0 || keyframe_scores[i] > keyframe_scores[best] ||
          (keyframe_scores[i] == keyframe_scores[best] && keyframes[i] < keyframes[best]))
        best = static_cast<int>(i);
    }
    if (best < 0) continue;
    ThumbnailCandidate cand;
    cand.frame_index = keyframes[best];
    cand.timestamp = timestamp_by_frame[cand.frame_index];
    cand.cluster_id = c;
    cand.cluster_size = size;
    cand.attractiveness = keyframe_scores[best];
    out.push_back(cand);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ThumbnailCandidate& a, const ThumbnailCandidate& b) {
                     if (a.cluster_size != b.cluster_size) return a.cluster_size > b.cluster_size;
                     if (a.attractiveness != b.attractiveness)
                       return a.attractiveness > b.attractiveness;
                     return a.frame_index < b.frame_index;
                   });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

// Full pipeline: quality filter -> subshot segmentation -> stillness
// keyframes -> gap-statistic clustering -> per-cluster best frame, ranked by
// cluster size. Degenerate inputs degrade to fallbacks instead of aborting:
// an all-filtered video reruns unfiltered, too few keyframes for the gap
// search turn into one cluster per keyframe, and a video without detected
// cuts is a single shot.
inline SelectionResult select_thumbnails(const std::vector<Frame>& frames,
                                         const SelectionConfig& cfg,
                                         const ForestModel* model = nullptr,
                                         const SpectrumPrior* prior = nullptr) {
  if (frames.empty()) throw EmptyStream("select_thumbnails: no frames");
  if (cfg.mode == ScoreMode::supervised_forest && model == nullptr)
    throw ModelMissing("supervised mode requires a model");

  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  const auto seconds_since = [](Clock::time_point from) {
    return std::chrono::duration<double>(Clock::now() - from).count();
  };

  SelectionResult result;
  PipelineReport& report = result.report;
  report.frames_total = static_cast<int>(frames.size());
  const double dt = frames.size() > 1 ? frames[1].timestamp - frames[0].timestamp : 0.0;
  report.video_duration = frames.back().timestamp + dt;

  // Stage 1: quality filtering.
  auto t_stage = Clock::now();
  std::vector<GrayFrame> grays(frames.size());
  parallel_for(frames.size(), cfg.threads, [&](std::size_t i) { grays[i] = to_gray(frames[i]); });
  const std::vector<FrameQuality> quality = compute_quality(frames, grays);
  const std::vector<int> boundaries = detect_shot_boundaries(grays, cfg.filter);
  FrameMask mask;
  try {
    mask = filter_frames(quality, boundaries, frames.size(), cfg.filter);
  } catch (const AllFramesFiltered&) {
    mask = detail::build_mask(frames.size(), quality, boundaries, cfg.filter, false, false);
    mask.filters_disabled = true;
    report.filters_disabled = true;
  }
  report.frames_after_filter = mask.kept_count();
  report.wall_time["filter"] = seconds_since(t_stage);

  // Stage 2: subshot segmentation and stillness keyframes.
  t_stage = Clock::now();
  const std::vector<double> still = stillness_series(grays, cfg.threads);
  std::vector<Frame> kept_frames;
  for (std::size_t i = 0; i < frames.size(); ++i)
    if (mask.keep[i]) kept_frames.push_back(frames[i]);
  const std::vector<FrameDescriptor> kept_descriptors =
      compute_descriptors(kept_frames, cfg.threads);
  const std::vector<Subshot> subshots =
      segment_subshots(mask, kept_descriptors, derive_seed(cfg.seed, 0x5b5));
  const std::vector<int> keyframes = extract_keyframes(subshots, still);
  report.keyframes = static_cast<int>(keyframes.size());
  report.wall_time["keyframes"] = seconds_since(t_stage);

  // Stage 3: keyframe clustering.
  t_stage = Clock::now();
  std::vector<const FrameDescriptor*> desc_by_frame(frames.size(), nullptr);
  for (const auto& d : kept_descriptors) desc_by_frame[d.index] = &d;
  Points key_points;
  key_points.reserve(keyframes.size());
  for (const int f : keyframes) key_points.push_back(desc_by_frame[f]->vector);

  std::vector<int> cluster_of_keyframe(keyframes.size(), 0);
  int n_clusters = 0;
  if (static_cast<int>(keyframes.size()) < cfg.gap.k_min) {
    report.gap_skipped = true;
    n_clusters = static_cast<int>(keyframes.size());
    std::iota(cluster_of_keyframe.begin(), cluster_of_keyframe.end(), 0);
  } else {
    GapConfig gap_cfg = cfg.gap;
    gap_cfg.threads = cfg.threads;
    const GapResult gap = gap_statistic(key_points, gap_cfg, derive_seed(cfg.seed, 0x9a9));
    const Clustering& clustering = gap.selected();
    n_clusters = clustering.k;
    cluster_of_keyframe = clustering.assignment;
  }
  report.clusters = n_clusters;
  report.wall_time["cluster"] = seconds_since(t_stage);

  // Stage 4: attractiveness scoring and ranking.
  t_stage = Clock::now();
  std::vector<AestheticVector> key_aesthetics;
  if (cfg.mode == ScoreMode::supervised_forest) {
    const SpectrumPrior fallback = prior ? SpectrumPrior{} : default_spectrum_prior();
    const SpectrumPrior& use_prior = prior ? *prior : fallback;
    key_aesthetics.resize(keyframes.size());
    parallel_for(keyframes.size(), cfg.threads, [&](std::size_t i) {
      key_aesthetics[i] = compute_aesthetic_vector(frames[keyframes[i]], use_prior);
    });
  }
  const ScoreTable scores = score_keyframes(keyframes, cfg.mode, model, still, key_aesthetics);

  std::vector<double> timestamp_by_frame(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) timestamp_by_frame[i] = frames[i].timestamp;
  result.candidates = rank_candidates(keyframes, cluster_of_keyframe, n_clusters,
                                      scores.scores, timestamp_by_frame);
  report.wall_time["score"] = seconds_since(t_stage);
  report.wall_time["total"] = seconds_since(t_start);
  return result;
}

// ---------------------------------------------------------------------------
// Output manifest
// ---------------------------------------------------------------------------

inline nlohmann::json selection_manifest(const SelectionResult& result, int frames_total,
                                         double duration_s, const nlohmann::json& config_echo,
                                         bool deterministic) {
  nlohmann::json j;
  j["video"] = {{"frames", frames_total}, {"duration_s", duration_s}};
  j["config"] = config_echo;
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : result.candidates) {
    j["candidates"].push_back({{"rank", c.rank},
                               {"frame_index", c.frame_index},
                               {"timestamp_s", c.timestamp},
                               {"cluster_id", c.cluster_id},
                               {"cluster_size", c.cluster_size},
                               {"attractiveness", c.attractiveness}});
  }
  nlohmann::json rep;
  rep["frames_total"] = result.report.frames_total;
  rep["frames_after_filter"] = result.report.frames_after_filter;
  rep["keyframes"] = result.report.keyframes;
  rep["clusters"] = result.report.clusters;
  rep["filters_disabled"] = result.report.filters_disabled;
  rep["gap_skipped"] = result.report.gap_skipped;
  rep["video_duration_s"] = result.report.video_duration;
  rep["wall_time_s"] = nlohmann::json::object();
  for (const auto& [stage, secs] : result.report.wall_time)
    rep["wall_time_s"][stage] = deterministic ? 0.0 : secs;
  j["report"] = rep;
  return j;
}

}  // namespace thumbforge
