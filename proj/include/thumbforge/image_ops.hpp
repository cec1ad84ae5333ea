/*
 * ThumbForge Video Thumbnail Library - Shared image operations
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "thumbforge/frame_io.hpp"

namespace thumbforge {

struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<float> gx, gy;  // row-major

  float mag(std::size_t i) const { return std::hypot(gx[i], gy[i]); }
};

// Central differences in the interior, one-sided differences at the borders,
// so a linear ramp has a spatially constant gradient.
inline GradientField compute_gradients(const GrayFrame& g) {
  GradientField out;
  out.width = g.width;
  out.height = g.height;
  out.gx.resize(g.pixels());
  out.gy.resize(g.pixels());
  const int w = g.width, h = g.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (w == 1)
        out.gx[i] = 0.f;
      else if (x == 0)
        out.gx[i] = g.at(y, 1) - g.at(y, 0);
      else if (x == w - 1)
        out.gx[i] = g.at(y, w - 1) - g.at(y, w - 2);
      else
        out.gx[i] = 0.5f * (g.at(y, x + 1) - g.at(y, x - 1));
      if (h == 1)
        out.gy[i] = 0.f;
      else if (y == 0)
        out.gy[i] = g.at(1, x) - g.at(0, x);
      else if (y == h - 1)
        out.gy[i] = g.at(h - 1, x) - g.at(h - 2, x);
      else
        out.gy[i] = 0.5f * (g.at(y + 1, x) - g.at(y - 1, x));
    }
  }
  return out;
}

// Binary dilation with a (2r+1)x(2r+1) square element, done as two sliding
// run-max passes.
inline std::vector<char> dilate(const std::vector<char>& src, int w, int h, int r) {
  std::vector<char> tmp(src.size()), dst(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      char v = 0;
      for (int dx = -r; dx <= r && !v; ++dx) {
        const int xx = x + dx;
        if (xx >= 0 && xx < w && src[static_cast<std::size_t>(y) * w + xx]) v = 1;
      }
      tmp[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      char v = 0;
      for (int dy = -r; dy <= r && !v; ++dy) {
        const int yy = y + dy;
        if (yy >= 0 && yy < h && tmp[static_cast<std::size_t>(yy) * w + x]) v = 1;
      }
      dst[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  return dst;
}

// 256-bin L1-normalized intensity histogram of values in [0,1].
inline std::vector<double> intensity_histogram(const std::vector<float>& values,
                                               int bins = 256) {
  std::vector<double> hist(bins, 0.0);
  if (values.empty()) return hist;
  for (const float v : values) {
    int b = static_cast<int>(v * bins);
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    hist[b] += 1.0;
  }
  const double n = static_cast<double>(values.size());
  for (double& x : hist) x /= n;
  return hist;
}

}  // namespace thumbforge
