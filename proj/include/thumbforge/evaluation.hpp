/*
 * ThumbForge Video Thumbnail Library - Evaluation protocol
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Near-duplicate matching against a ground-truth frame and P@k aggregation
 * over a corpus manifest.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "thumbforge/common.hpp"
#include "thumbforge/descriptors.hpp"
#include "thumbforge/frame_io.hpp"

namespace thumbforge {

enum class MatcherKind { exact_index, descriptor_l2, pixel_ssd };

struct MatchConfig {
  MatcherKind matcher = MatcherKind::pixel_ssd;
  double theta = 0.005;
};

inline MatcherKind matcher_from_string(const std::string& s) {
  if (s == "exact_index" || s == "exact") return MatcherKind::exact_index;
  if (s == "descriptor_l2" || s == "descriptor") return MatcherKind::descriptor_l2;
  if (s == "pixel_ssd" || s == "pixel") return MatcherKind::pixel_ssd;
  throw ManifestError("unknown matcher: " + s);
}

// Mean squared pixel difference between 64x64 RGB downscales.
inline double pixel_ssd_distance(const Frame& a, const Frame& b) {
  constexpr int kSide = 64;
  const auto da = resize_bilinear(a.rgb, a.width, a.height, kSide, kSide, 3);
  const auto db = resize_bilinear(b.rgb, b.width, b.height, kSide, kSide, 3);
  double sum = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    sum += d * d;
  }
  return sum / static_cast<double>(da.size());
}

// Descriptor distance scaled into [0,1): |a-b| / (|a| + |b|).
inline double normalized_descriptor_distance(const FrameDescriptor& a,
                                             const FrameDescriptor& b) {
  const double dist = descriptor_distance(a, b);
  double na = 0.0, nb = 0.0;
  for (const double v : a.vector) na += v * v;
  for (const double v : b.vector) nb += v * v;
  const double denom = std::sqrt(na) + std::sqrt(nb);
  return denom > 0.0 ? dist / denom : 0.0;
}

// Pluggable near-duplicate decision against one ground-truth frame. The
// pixel matcher caches the ground truth's downscale across calls.
class NearDuplicateMatcher {
 public:
  NearDuplicateMatcher(const MatchConfig& cfg, int gt_index,
                       const std::vector<Frame>* frames = nullptr,
                       const std::vector<FrameDescriptor>* descriptors = nullptr)
      : cfg_(cfg), gt_index_(gt_index), frames_(frames), descriptors_(descriptors) {
    if (cfg_.matcher == MatcherKind::pixel_ssd) {
      if (!frames_) throw MatcherUnavailable("pixel matcher needs frames");
      gt_small_ = small_rgb(frame_at(gt_index_));
    } else if (cfg_.matcher == MatcherKind::descriptor_l2) {
      if (!descriptors_) throw MatcherUnavailable("descriptor matcher needs descriptors");
      gt_descriptor_ = &descriptor_at(gt_index_);
    }
  }

  bool matches(int candidate_index) const {
    switch (cfg_.matcher) {
      case MatcherKind::exact_index:
        return candidate_index == gt_index_;
      case MatcherKind::pixel_ssd: {
        const auto cand = small_rgb(frame_at(candidate_index));
        double sum = 0.0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
          const double d = static_cast<double>(cand[i]) - gt_small_[i];
          sum += d * d;
        }
        return sum / static_cast<double>(cand.size()) < cfg_.theta;
      }
      case MatcherKind::descriptor_l2:
        return normalized_descriptor_distance(descriptor_at(candidate_index), *gt_descriptor_) <
               cfg_.theta;
    }
    return false;
  }

 private:
  static std::vector<float> small_rgb(const Frame& f) {
    return resize_bilinear(f.rgb, f.width, f.height, 64, 64, 3);
  }

  const Frame& frame_at(int index) const {
    for (const Frame& f : *frames_)
      if (f.index == index) return f;
    throw MatcherUnavailable("frame " + std::to_string(index) + " not available");
  }

  const FrameDescriptor& descriptor_at(int index) const {
    for (const FrameDescriptor& d : *descriptors_)
      if (d.index == index) return d;
    throw MatcherUnavailable("descriptor " + std::to_string(index) + " not available");
  }

  MatchConfig cfg_;
  int gt_index_;
  const std::vector<Frame>* frames_;
  const std::vector<FrameDescriptor>* descriptors_;
  std::vector<float> gt_small_;
  const FrameDescriptor* gt_descriptor_ = nullptr;
};

// P@k of a ranked candidate list: 1 iff any of the top-k candidates matches.
// k beyond the list length is treated as the list length.
inline int precision_at_k(const std::vector<int>& ranked_candidates,
                          const NearDuplicateMatcher& matcher, int k) {
  if (k < 1) throw EmptyInput("precision_at_k: k must be >= 1");
  const int top = std::min<int>(k, static_cast<int>(ranked_candidates.size()));
  for (int i = 0; i < top; ++i)
    if (matcher.matches(ranked_candidates[i])) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Corpus manifest (JSON lines) and aggregation
// ---------------------------------------------------------------------------

struct VideoRecord {
  std::string id;
  std::string source;       // path
  SourceKind source_kind = SourceKind::y4m;
  int gt_frame_index = -1;
  std::string category;     // optional
  int width = 0, height = 0;  // raw sources only
  int fps_num = 30, fps_den = 1;
};

inline SourceKind source_kind_from_string(const std::string& s) {
  if (s == "y4m") return SourceKind::y4m;
  if (s == "raw") return SourceKind::raw;
  if (s == "imagedir") return SourceKind::imagedir;
  throw ManifestError("unknown source_kind: " + s);
}

inline std::vector<VideoRecord> parse_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path);
  std::vector<VideoRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ManifestError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    VideoRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      r.source = j.at("source").get<std::string>();
      r.source_kind = source_kind_from_string(j.at("source_kind").get<std::string>());
      r.gt_frame_index = j.at("gt_frame_index").get<int>();
      if (j.contains("category")) r.category = j["category"].get<std::string>();
      if (j.contains("width")) r.width = j["width"].get<int>();
      if (j.contains("height")) r.height = j["height"].get<int>();
      if (j.contains("fps_num")) r.fps_num = j["fps_num"].get<int>();
      if (j.contains("fps_den")) r.fps_den = j["fps_den"].get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw ManifestError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ManifestError("manifest " + path + " lists no videos");
  return records;
}

inline std::vector<Frame> load_video(const VideoRecord& r) {
  switch (r.source_kind) {
    case SourceKind::y4m: {
      Y4mSource src(r.source);
      return src.read_all();
    }
    case SourceKind::raw: {
      if (r.width <= 0 || r.height <= 0)
        throw ManifestError("raw source " + r.id + " needs width/height");
      RawRgbSource src(r.source, r.width, r.height, r.fps_num, r.fps_den);
      return src.read_all();
    }
    case SourceKind::imagedir: {
      ImageDirSource src(r.source, r.fps_num, r.fps_den);
      return src.read_all();
    }
  }
  throw ManifestError("unreachable source kind");
}

struct EvalRow {
  std::string method;
  int k = 0;
  double mean_p = 0.0;
  int n_videos = 0;
  std::string category;  // empty = all videos
};

using MethodFn = std::function<std::vector<int>(const VideoRecord&, const std::vector<Frame>&)>;
using LoaderFn = std::function<std::vector<Frame>(const VideoRecord&)>;

// Runs `method` on every manifest video and averages P@k per k, with a
// per-category breakdown when categories are present.
inline std::vector<EvalRow> mean_precision_at_k(const std::vector<VideoRecord>& records,
                                                const std::string& method_name,
                                                const MethodFn& method, const LoaderFn& loader,
                                                const std::vector<int>& ks,
                                                const MatchConfig& match_cfg) {
  if (records.empty()) throw ManifestError("no videos to evaluate");
  std::map<std::string, std::map<int, std::pair<double, int>>> sums;  // category -> k -> (sum, n)
  bool any_category = false;
  for (const auto& record : records) {
    const std::vector<Frame> frames = loader(record);
    if (frames.empty()) throw ManifestError("video " + record.id + " has no frames");
    if (record.gt_frame_index < 0 || record.gt_frame_index >= static_cast<int>(frames.size()))
      throw ManifestError("video " + record.id + " gt index out of range");
    std::optional<std::vector<FrameDescriptor>> descriptors;
    if (match_cfg.matcher == MatcherKind::descriptor_l2)
      descriptors = compute_descriptors(frames);
    const NearDuplicateMatcher matcher(match_cfg, record.gt_frame_index, &frames,
                                       descriptors ? &*descriptors : nullptr);
    const std::vector<int> ranked = method(record, frames);
    for (const int k : ks) {
      const int hit = precision_at_k(ranked, matcher, k);
      auto& overall = sums[""][k];
      overall.first += hit;
      overall.second += 1;
      if (!record.category.empty()) {
        any_category = true;
        auto& cat = sums[record.category][k];
        cat.first += hit;
        cat.second += 1;
      }
    }
  }
  std::vector<EvalRow> rows;
  for (const auto& [category, by_k] : sums) {
    if (category.empty() || any_category) {
      for (const auto& [k, sum_n] : by_k)
        rows.push_back({method_name, k, sum_n.first / sum_n.second, sum_n.second, category});
    }
  }
  return rows;
}

inline std::string eval_rows_to_csv(const std::vector<EvalRow>& rows) {
  const bool any_category =
      std::any_of(rows.begin(), rows.end(), [](const EvalRow& r) { return !r.category.empty(); });
  std::ostringstream out;
  out << "method,k,mean_p_at_k,n_videos";
  if (any_category) out << ",category";
  out << "\n";
  for (const auto& r : rows) {
    out << r.method << "," << r.k << "," << format_double(r.mean_p) << "," << r.n_videos;
    if (any_category) out << "," << (r.category.empty() ? "all" : r.category);
    out << "\n";
  }
  return out.str();
}

}  // namespace thumbforge
