/*
 * ThumbForge Video Thumbnail Library - Radix-2 FFT
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Small iterative power-of-two FFT, enough for the 64x64 spectral features.
 */

#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "thumbforge/common.hpp"

namespace thumbforge {

using Complex = std::complex<double>;

inline void fft_inplace(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw DimensionMismatch("fft length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1 : -1);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

// In-place 2D FFT over a row-major n x n grid.
inline void fft2_inplace(std::vector<Complex>& grid, int n, bool inverse) {
  std::vector<Complex> line(n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) line[x] = grid[static_cast<std::size_t>(y) * n + x];
    fft_inplace(line, inverse);
    for (int x = 0; x < n; ++x) grid[static_cast<std::size_t>(y) * n + x] = line[x];
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) line[y] = grid[static_cast<std::size_t>(y) * n + x];
    fft_inplace(line, inverse);
    for (int y = 0; y < n; ++y) grid[static_cast<std::size_t>(y) * n + x] = line[y];
  }
}

}  // namespace thumbforge
