/*
 * ThumbForge Video Thumbnail Library - Frame descriptors
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * 2,220-dim frame descriptor: per region, three 128-bin HSV histograms plus
 * 30-bin edge orientation / magnitude histograms, over a two-level spatial
 * pyramid (whole image + 2x2 quadrants = five regions).
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <vector>

#include "thumbforge/common.hpp"
#include "thumbforge/frame_io.hpp"
#include "thumbforge/image_ops.hpp"

namespace thumbforge {

inline constexpr int kHsvBins = 128;
inline constexpr int kEdgeBins = 30;
inline constexpr int kPyramidRegions = 5;
inline constexpr int kRegionDims = kHsvBins * 3 + kEdgeBins * 2;  // 444
inline constexpr int kDescriptorDims = kRegionDims * kPyramidRegions;  // 2220
inline constexpr double kEdgePixelThreshold = 0.05;
inline constexpr double kMaxGradientMagnitude = 1.4142135623730951;  // sqrt(2)

struct FrameDescriptor {
  int index = 0;
  std::vector<double> vector;  // kDescriptorDims entries, all >= 0
};

namespace detail {

struct Region {
  int x0, y0, x1, y1;  // half-open
};

// Whole image first, then 2x2 quadrants row-major. Odd dimensions put the
// extra row/column in the bottom/right quadrants.
inline std::array<Region, kPyramidRegions> pyramid_regions(int w, int h) {
  const int mx = w / 2, my = h / 2;
  return {Region{0, 0, w, h}, Region{0, 0, mx, my}, Region{mx, 0, w, my},
          Region{0, my, mx, h}, Region{mx, my, w, h}};
}

inline void l1_normalize(double* v, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += v[i];
  if (sum > 0.0)
    for (int i = 0; i < n; ++i) v[i] /= sum;
}

inline int clamp_bin(double x, int bins) {
  int b = static_cast<int>(x);
  if (b < 0) b = 0;
  if (b >= bins) b = bins - 1;
  return b;
}

}  // namespace detail

// Histogram layout per region: H(128) S(128) V(128) orientation(30)
// magnitude(30). Orientation covers [0,pi) and is magnitude-weighted over
// edge pixels; a region with no edge pixels emits a uniform orientation
// histogram and an all-zero magnitude histogram.
inline FrameDescriptor compute_descriptor(const Frame& frame) {
  if (frame.width < 8 || frame.height < 8)
    throw FrameTooSmall("descriptor needs at least 8x8");

  const HsvFrame hsv = to_hsv(frame);
  const GrayFrame gray = to_gray(frame);
  const GradientField grad = compute_gradients(gray);

  FrameDescriptor d;
  d.index = frame.index;
  d.vector.assign(kDescriptorDims, 0.0);

  const auto regions = detail::pyramid_regions(frame.width, frame.height);
  for (int r = 0; r < kPyramidRegions; ++r) {
    const auto& reg = regions[r];
    double* base = d.vector.data() + static_cast<std::size_t>(r) * kRegionDims;
    double* hist_h = base;
    double* hist_s = base + kHsvBins;
    double* hist_v = base + 2 * kHsvBins;
    double* hist_o = base + 3 * kHsvBins;
    double* hist_m = base + 3 * kHsvBins + kEdgeBins;

    bool any_edge = false;
    for (int y = reg.y0; y < reg.y1; ++y) {
      for (int x = reg.x0; x < reg.x1; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * frame.width + x;
        hist_h[detail::clamp_bin(hsv.h[i] * kHsvBins, kHsvBins)] += 1.0;
        hist_s[detail::clamp_bin(hsv.s[i] * kHsvBins, kHsvBins)] += 1.0;
        hist_v[detail::clamp_bin(hsv.v[i] * kHsvBins, kHsvBins)] += 1.0;
        const double mag = grad.mag(i);
        if (mag > kEdgePixelThreshold) {
          any_edge = true;
          double theta = std::atan2(grad.gy[i], grad.gx[i]);
          if (theta < 0) theta += std::numbers::pi;
          if (theta >= std::numbers::pi) theta -= std::numbers::pi;
          hist_o[detail::clamp_bin(theta / std::numbers::pi * kEdgeBins, kEdgeBins)] += mag;
          hist_m[detail::clamp_bin(mag / kMaxGradientMagnitude * kEdgeBins, kEdgeBins)] += 1.0;
        }
      }
    }
    detail::l1_normalize(hist_h, kHsvBins);
    detail::l1_normalize(hist_s, kHsvBins);
    detail::l1_normalize(hist_v, kHsvBins);
    if (any_edge) {
      detail::l1_normalize(hist_o, kEdgeBins);
      detail::l1_normalize(hist_m, kEdgeBins);
    } else {
      for (int b = 0; b < kEdgeBins; ++b) hist_o[b] = 1.0 / kEdgeBins;
      // magnitude histogram stays all-zero
    }
  }
  return d;
}

inline double descriptor_distance(const FrameDescriptor& a, const FrameDescriptor& b) {
  if (a.vector.size() != b.vector.size())
    throw DimensionMismatch("descriptor dimensions differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.vector.size(); ++i) {
    const double d = a.vector[i] - b.vector[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

inline std::vector<FrameDescriptor> compute_descriptors(const std::vector<Frame>& frames,
                                                        int threads = 0) {
  std::vector<FrameDescriptor> out(frames.size());
  parallel_for(frames.size(), threads, [&](std::size_t i) {
    out[i] = compute_descriptor(frames[i]);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Binary dump: magic "THDESC01", then per frame a little-endian u32 index
// followed by 2,220 little-endian f32 values.
// ---------------------------------------------------------------------------

inline constexpr char kDescriptorMagic[8] = {'T', 'H', 'D', 'E', 'S', 'C', '0', '1'};

inline void write_descriptors(const std::vector<FrameDescriptor>& descriptors,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot write " + path);
  out.write(kDescriptorMagic, sizeof(kDescriptorMagic));
  for (const auto& d : descriptors) {
    const std::uint32_t idx = static_cast<std::uint32_t>(d.index);
    out.write(reinterpret_cast<const char*>(&idx), 4);
    for (const double v : d.vector) {
      const float f = static_cast<float>(v);
      out.write(reinterpret_cast<const char*>(&f), 4);
    }
  }
}

inline std::vector<FrameDescriptor> read_descriptors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || !std::equal(magic, magic + 8, kDescriptorMagic))
    throw BadMagic("not a THDESC01 file: " + path);
  std::vector<FrameDescriptor> out;
  for (;;) {
    std::uint32_t idx = 0;
    in.read(reinterpret_cast<char*>(&idx), 4);
    if (in.gcount() == 0) break;
    if (in.gcount() != 4) throw TruncatedFrame("short descriptor record in " + path);
    FrameDescriptor d;
    d.index = static_cast<int>(idx);
    d.vector.resize(kDescriptorDims);
    for (int i = 0; i < kDescriptorDims; ++i) {
      float f = 0.f;
      in.read(reinterpret_cast<char*>(&f), 4);
      if (in.gcount() != 4) throw TruncatedFrame("short descriptor record in " + path);
      d.vector[i] = f;
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace thumbforge
