/*
 * ThumbForge Video Thumbnail Library - Test fixtures
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Synthetic frames and videos with planted, known-answer structure.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "thumbforge/clustering.hpp"
#include "thumbforge/common.hpp"
#include "thumbforge/frame_io.hpp"

namespace fixtures {

using thumbforge::Frame;
using thumbforge::GrayFrame;
using thumbforge::Rng;

inline Frame solid_frame(int w, int h, float r, float g, float b, int index = 0) {
  Frame f;
  f.index = index;
  f.width = w;
  f.height = h;
  f.rgb.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < f.rgb.size(); i += 3) {
    f.rgb[i] = r;
    f.rgb[i + 1] = g;
    f.rgb[i + 2] = b;
  }
  return f;
}

inline Frame gray_frame(int w, int h, float v, int index = 0) {
  return solid_frame(w, h, v, v, v, index);
}

template <typename Fn>
Frame frame_from_gray_fn(int w, int h, Fn&& value_at, int index = 0) {
  Frame f;
  f.index = index;
  f.width = w;
  f.height = h;
  f.rgb.resize(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float v = std::clamp(static_cast<float>(value_at(x, y)), 0.f, 1.f);
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      f.rgb[i] = f.rgb[i + 1] = f.rgb[i + 2] = v;
    }
  }
  return f;
}

inline GrayFrame gray_of(const Frame& f) { return thumbforge::to_gray(f); }

// ---------------------------------------------------------------------------
// Value-noise texture: coarse random grid, bilinear interpolation, per-pixel
// jitter. With amplitude [0.2, 0.8] and cell 8, the gradient magnitude stays
// below the 0.1 edge threshold, so these frames carry no ECR edges, while
// the mean gradient stays above the blur threshold.
// ---------------------------------------------------------------------------

struct TextureParams {
  int cell = 8;
  float lo = 0.2f;
  float hi = 0.8f;
  float jitter = 0.01f;
};

struct ValueNoise {
  int w = 0, h = 0, cell = 8;
  std::vector<float> grid;  // (gw+1) x (gh+1) corner values
  int gw = 0, gh = 0;

  ValueNoise(int width, int height, const TextureParams& p, Rng& rng)
      : w(width), h(height), cell(p.cell) {
    gw = (w + cell - 1) / cell;
    gh = (h + cell - 1) / cell;
    grid.resize(static_cast<std::size_t>(gw + 1) * (gh + 1));
    for (auto& v : grid) v = static_cast<float>(rng.uniform(p.lo, p.hi));
  }

  float at(int x, int y) const {
    const float fx = static_cast<float>(x) / cell;
    const float fy = static_cast<float>(y) / cell;
    const int x0 = std::min(static_cast<int>(fx), gw - 1);
    const int y0 = std::min(static_cast<int>(fy), gh - 1);
    const float tx = fx - x0, ty = fy - y0;
    const auto g = [&](int yy, int xx) {
      return grid[static_cast<std::size_t>(yy) * (gw + 1) + xx];
    };
    const float top = g(y0, x0) * (1 - tx) + g(y0, x0 + 1) * tx;
    const float bot = g(y0 + 1, x0) * (1 - tx) + g(y0 + 1, x0 + 1) * tx;
    return top * (1 - ty) + bot * ty;
  }
};

// Grayscale textured frame that passes every default quality threshold.
inline Frame textured_frame(int w, int h, std::uint64_t seed, int index = 0,
                            const TextureParams& params = {}) {
  Rng rng(seed);
  const ValueNoise noise(w, h, params, rng);
  Rng jitter_rng(thumbforge::derive_seed(seed, 0x71));
  return frame_from_gray_fn(
      w, h,
      [&](int x, int y) {
        return noise.at(x, y) +
               static_cast<float>(jitter_rng.uniform(-params.jitter, params.jitter));
      },
      index);
}

// Colored textured frame: fixed hue band, fixed saturation, value noise in
// brightness. Distinct hues separate cleanly in descriptor space.
inline Frame scene_frame(int w, int h, double hue, double sat, std::uint64_t texture_seed,
                         std::uint64_t jitter_seed, int index = 0, float jitter = 0.012f,
                         float v_lo = 0.35f, float v_hi = 0.9f) {
  Rng rng(texture_seed);
  TextureParams params;
  params.cell = 6;
  params.lo = v_lo;
  params.hi = v_hi;
  params.jitter = 0.f;
  const ValueNoise noise(w, h, params, rng);
  Rng jr(jitter_seed);
  Frame f;
  f.index = index;
  f.width = w;
  f.height = h;
  f.rgb.resize(static_cast<std::size_t>(w) * h * 3);
  Rng pix_hue(thumbforge::derive_seed(texture_seed, 0x42));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double hh = hue + pix_hue.uniform(-0.02, 0.02);
      const float vv = std::clamp(
          noise.at(x, y) + static_cast<float>(jr.uniform(-jitter, jitter)), 0.f, 1.f);
      float r, g, b;
      thumbforge::hsv_to_rgb(static_cast<float>(hh - std::floor(hh)),
                             static_cast<float>(sat), vv, r, g, b);
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      f.rgb[i] = r;
      f.rgb[i + 1] = g;
      f.rgb[i + 2] = b;
    }
  }
  return f;
}

// High-contrast random rectangle pattern; carries strong ECR edges.
inline Frame rectangle_frame(int w, int h, std::uint64_t seed, int index = 0) {
  Rng rng(seed);
  Frame f = gray_frame(w, h, 0.5f, index);
  const int n_rects = 12;
  for (int r = 0; r < n_rects; ++r) {
    const int x0 = static_cast<int>(rng.uniform_index(w));
    const int y0 = static_cast<int>(rng.uniform_index(h));
    const int rw = 4 + static_cast<int>(rng.uniform_index(w / 2));
    const int rh = 4 + static_cast<int>(rng.uniform_index(h / 2));
    const float v = static_cast<float>(rng.uniform(0.15, 0.9));
    for (int y = y0; y < std::min(h, y0 + rh); ++y)
      for (int x = x0; x < std::min(w, x0 + rw); ++x) {
        const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
        f.rgb[i] = f.rgb[i + 1] = f.rgb[i + 2] = v;
      }
  }
  return f;
}

inline void set_index(Frame& f, int index, double fps = 30.0) {
  f.index = index;
  f.timestamp = index / fps;
}

inline void reindex(std::vector<Frame>& frames, double fps = 30.0) {
  for (std::size_t i = 0; i < frames.size(); ++i) set_index(frames[i], static_cast<int>(i), fps);
}

// ---------------------------------------------------------------------------
// Filter fixture: clean textured frames with planted dark / blurry / uniform
// frames at known positions. None of the frames carries ECR edges, so no
// shot boundaries fire.
// ---------------------------------------------------------------------------

struct FilterFixture {
  std::vector<Frame> frames;
  std::vector<int> dark, blurry, uniform;  // planted indices

  bool is_planted(int i) const {
    const auto has = [i](const std::vector<int>& v) {
      return std::find(v.begin(), v.end(), i) != v.end();
    };
    return has(dark) || has(blurry) || has(uniform);
  }
};

inline FilterFixture filter_fixture(int n_clean = 200, int w = 96, int h = 72,
                                    std::uint64_t seed = 1) {
  FilterFixture fx;
  const int total = n_clean + 15;
  // Planted positions spread through the stream, never adjacent.
  std::vector<int> planted;
  for (int i = 0; i < 15; ++i) planted.push_back(7 + i * (total - 14) / 15);
  for (int i = 0; i < total; ++i) {
    const auto it = std::find(planted.begin(), planted.end(), i);
    if (it == planted.end()) {
      fx.frames.push_back(textured_frame(w, h, thumbforge::derive_seed(seed, i), i));
      continue;
    }
    const int slot = static_cast<int>(it - planted.begin());
    if (slot % 3 == 0) {
      // Dark: a scaled-down texture; fails the luminance threshold.
      Frame f = textured_frame(w, h, thumbforge::derive_seed(seed, 0xD000 + i), i);
      for (auto& v : f.rgb) v *= 0.12f;
      fx.frames.push_back(std::move(f));
      fx.dark.push_back(i);
    } else if (slot % 3 == 1) {
      // Blurry: a smooth diagonal ramp; plenty of distinct intensities but
      // nearly zero gradient.
      fx.frames.push_back(frame_from_gray_fn(w, h, [&](int x, int y) {
        return 0.3 + 0.4 * (x + y) / static_cast<double>(w + h - 2);
      }, i));
      fx.blurry.push_back(i);
    } else {
      // Uniform: constant mid-gray.
      fx.frames.push_back(gray_frame(w, h, 0.5f, i));
      fx.uniform.push_back(i);
    }
  }
  reindex(fx.frames);
  return fx;
}

// ---------------------------------------------------------------------------
// Cut fixture: static rectangle scenes with hard cuts at known indices.
// ---------------------------------------------------------------------------

inline std::vector<Frame> cut_fixture(const std::vector<int>& cuts, int total, int w = 96,
                                      int h = 72, std::uint64_t seed = 2) {
  std::vector<Frame> frames;
  int scene = 0;
  std::vector<int> starts = {0};
  for (const int c : cuts) starts.push_back(c);
  for (int i = 0; i < total; ++i) {
    if (scene + 1 < static_cast<int>(starts.size()) && i >= starts[scene + 1]) ++scene;
    frames.push_back(rectangle_frame(w, h, thumbforge::derive_seed(seed, scene), i));
  }
  reindex(frames);
  return frames;
}

// ---------------------------------------------------------------------------
// Y4M writer (bit-exact fixture files for CLI tests).
// ---------------------------------------------------------------------------

inline void write_y4m(const std::vector<Frame>& frames, const std::string& path,
                      int fps_num = 30, int fps_den = 1) {
  std::ofstream out(path, std::ios::binary);
  const int w = frames.front().width, h = frames.front().height;
  out << "YUV4MPEG2 W" << w << " H" << h << " F" << fps_num << ":" << fps_den << " C444\n";
  for (const auto& f : frames) {
    out << "FRAME\n";
    std::vector<std::uint8_t> plane(static_cast<std::size_t>(w) * h);
    // BT.601 full-range RGB -> YUV, the inverse of the reader.
    const auto emit = [&](auto&& fn) {
      for (std::size_t i = 0; i < plane.size(); ++i) {
        const float r = f.rgb[i * 3], g = f.rgb[i * 3 + 1], b = f.rgb[i * 3 + 2];
        plane[i] = static_cast<std::uint8_t>(
            std::lround(std::clamp(fn(r, g, b), 0.0, 1.0) * 255.0));
      }
      out.write(reinterpret_cast<const char*>(plane.data()),
                static_cast<std::streamsize>(plane.size()));
    };
    emit([](float r, float g, float b) { return 0.299 * r + 0.587 * g + 0.114 * b; });
    emit([](float r, float g, float b) {
      return (b - (0.299 * r + 0.587 * g + 0.114 * b)) / 1.772 + 0.5;
    });
    emit([](float r, float g, float b) {
      return (r - (0.299 * r + 0.587 * g + 0.114 * b)) / 1.402 + 0.5;
    });
  }
}

// Seeded Gaussian blobs for clustering tests.
struct BlobData {
  thumbforge::Points points;
  std::vector<int> labels;
};

inline BlobData gaussian_blobs(int n_blobs, int per_blob, int dim, double separation,
                               double sigma, std::uint64_t seed) {
  BlobData data;
  Rng rng(seed);
  std::vector<std::vector<double>> centers;
  for (int b = 0; b < n_blobs; ++b) {
    for (;;) {
      std::vector<double> c(dim);
      for (auto& v : c) v = rng.uniform(0.0, 100.0);
      bool ok = true;
      for (const auto& other : centers) {
        double d2 = 0.0;
        for (int j = 0; j < dim; ++j) d2 += (c[j] - other[j]) * (c[j] - other[j]);
        if (std::sqrt(d2) < separation) {
          ok = false;
          break;
        }
      }
      if (ok) {
        centers.push_back(std::move(c));
        break;
      }
    }
  }
  for (int b = 0; b < n_blobs; ++b) {
    for (int i = 0; i < per_blob; ++i) {
      std::vector<double> p(dim);
      for (int j = 0; j < dim; ++j) p[j] = centers[b][j] + sigma * rng.gaussian();
      data.points.push_back(std::move(p));
      data.labels.push_back(b);
    }
  }
  return data;
}

}  // namespace fixtures
