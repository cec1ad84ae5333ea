/*
 * ThumbForge Video Thumbnail Library - Aesthetic features
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * The 52-dim visual aesthetic vector (color, texture, basic quality and
 * composition features) plus the stillness score used for keyframe and
 * thumbnail selection.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "thumbforge/common.hpp"
#include "thumbforge/fft.hpp"
#include "thumbforge/frame_io.hpp"
#include "thumbforge/image_ops.hpp"

namespace thumbforge {

inline constexpr int kAestheticDims = 52;
inline constexpr int kAnalysisDims = 53;  // aesthetics + stillness
inline constexpr int kSpectrumSize = 64;  // canonical resolution for spectral features

struct AestheticVector {
  int index = 0;
  std::vector<double> vector;  // exactly kAestheticDims entries
};

// Mean log-amplitude spectrum of natural images at the canonical resolution.
struct SpectrumPrior {
  std::vector<double> log_amplitude;  // kSpectrumSize x kSpectrumSize
};

// Constants of the no-reference JPEG quality model (blockiness / activity /
// zero-crossing regression), overridable for recalibration.
struct JpegQualityParams {
  double alpha = -245.8909;
  double beta = 261.9373;
  double gamma1 = -0.0240;
  double gamma2 = 0.0160;
  double gamma3 = 0.0064;
};

// Feature slot names in vector order; analysis appends "stillness".
inline std::vector<std::string> aesthetic_feature_names() {
  std::vector<std::string> names;
  names.emplace_back("contrast");
  for (const char* c : {"h", "s", "v"}) names.push_back(std::string("hsv_avg_") + c);
  for (const char* c : {"h", "s", "v"}) names.push_back(std::string("hsv_central_") + c);
  for (int i = 0; i < 12; ++i) names.push_back("hsv_hist_h_" + std::to_string(i));
  for (int i = 0; i < 3; ++i) names.push_back("hsv_hist_s_" + std::to_string(i));
  for (int i = 0; i < 5; ++i) names.push_back("hsv_hist_v_" + std::to_string(i));
  for (const char* c : {"h", "s", "v"}) names.push_back(std::string("hsv_contrast_") + c);
  names.emplace_back("pleasure");
  names.emplace_back("arousal");
  names.emplace_back("dominance");
  names.emplace_back("glcm_entropy");
  names.emplace_back("glcm_energy");
  names.emplace_back("glcm_contrast");
  names.emplace_back("glcm_homogeneity");
  names.emplace_back("contrast_balance");
  names.emplace_back("exposure_balance");
  names.emplace_back("jpeg_quality");
  names.emplace_back("sharpness_sobel");
  for (int i = 0; i < 9; ++i) names.push_back("object_presence_" + std::to_string(i));
  names.emplace_back("uniqueness");
  names.emplace_back("symmetry");
  return names;
}

// ---------------------------------------------------------------------------
// Color
// ---------------------------------------------------------------------------

// Ratio between luminance range and average luminance; 0 for all-black.
inline double contrast_feature(const GrayFrame& g) {
  if (g.gray.empty()) return 0.0;
  float mn = g.gray[0], mx = g.gray[0];
  double sum = 0.0;
  for (const float v : g.gray) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    sum += v;
  }
  const double mean = sum / static_cast<double>(g.pixels());
  return mean > 0.0 ? (static_cast<double>(mx) - mn) / mean : 0.0;
}

namespace detail {

inline double mean_of(const std::vector<float>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double mean_window(const std::vector<float>& v, int w, int h, int x0, int y0,
                          int ww, int wh) {
  double sum = 0.0;
  for (int y = y0; y < y0 + wh; ++y)
    for (int x = x0; x < x0 + ww; ++x) sum += v[static_cast<std::size_t>(y) * w + x];
  return sum / (static_cast<double>(ww) * wh);
}

inline std::vector<double> channel_histogram(const std::vector<float>& v, int bins) {
  return intensity_histogram(v, bins);
}

inline double hist_stddev(const std::vector<double>& hist) {
  const double mean = std::accumulate(hist.begin(), hist.end(), 0.0) / hist.size();
  double var = 0.0;
  for (const double x : hist) var += (x - mean) * (x - mean);
  return std::sqrt(var / hist.size());
}

}  // namespace detail

// 32 values: channel means (3), central-quadrant means (3), 12/3/5-bin HSV
// histograms (20), histogram standard deviations (3), and the PAD affect
// scores (3) as linear combinations of mean saturation and brightness.
inline std::vector<double> hsv_stats(const HsvFrame& f) {
  std::vector<double> out;
  out.reserve(32);
  out.push_back(detail::mean_of(f.h));
  out.push_back(detail::mean_of(f.s));
  out.push_back(detail::mean_of(f.v));

  // Axis-centered H/2 x W/2 window.
  const int ww = std::max(1, f.width / 2);
  const int wh = std::max(1, f.height / 2);
  const int x0 = (f.width - ww) / 2;
  const int y0 = (f.height - wh) / 2;
  out.push_back(detail::mean_window(f.h, f.width, f.height, x0, y0, ww, wh));
  out.push_back(detail::mean_window(f.s, f.width, f.height, x0, y0, ww, wh));
  out.push_back(detail::mean_window(f.v, f.width, f.height, x0, y0, ww, wh));

  const auto hist_h = detail::channel_histogram(f.h, 12);
  const auto hist_s = detail::channel_histogram(f.s, 3);
  const auto hist_v = detail::channel_histogram(f.v, 5);
  out.insert(out.end(), hist_h.begin(), hist_h.end());
  out.insert(out.end(), hist_s.begin(), hist_s.end());
  out.insert(out.end(), hist_v.begin(), hist_v.end());

  out.push_back(detail::hist_stddev(hist_h));
  out.push_back(detail::hist_stddev(hist_s));
  out.push_back(detail::hist_stddev(hist_v));

  // Valdez-Mehrabian pleasure/arousal/dominance on mean S and mean V.
  const double ms = out[1], mv = out[2];
  out.push_back(0.69 * mv + 0.22 * ms);
  out.push_back(-0.31 * mv + 0.60 * ms);
  out.push_back(-0.76 * mv + 0.32 * ms);
  return out;
}

// ---------------------------------------------------------------------------
// Texture: gray-level co-occurrence matrix at distance 1, four orientations
// accumulated into one symmetric normalized matrix, 16 gray levels.
// ---------------------------------------------------------------------------

struct GlcmFeatures {
  double entropy = 0.0;
  double energy = 0.0;
  double contrast = 0.0;
  double homogeneity = 0.0;
};

inline GlcmFeatures glcm_features(const GrayFrame& g) {
  if (g.width < 2 || g.height < 2) throw FrameTooSmall("glcm needs at least 2x2");
  constexpr int kLevels = 16;
  std::vector<int> q(g.pixels());
  for (std::size_t i = 0; i < g.pixels(); ++i) {
    int level = static_cast<int>(g.gray[i] * kLevels);
    q[i] = std::clamp(level, 0, kLevels - 1);
  }
  std::array<double, kLevels * kLevels> p{};
  double total = 0.0;
  constexpr int offsets[4][2] = {{0, 1}, {-1, 1}, {-1, 0}, {-1, -1}};  // 0,45,90,135 deg
  for (const auto& off : offsets) {
    for (int y = 0; y < g.height; ++y) {
      const int yy = y + off[0];
      if (yy < 0 || yy >= g.height) continue;
      for (int x = 0; x < g.width; ++x) {
        const int xx = x + off[1];
        if (xx < 0 || xx >= g.width) continue;
        const int a = q[static_cast<std::size_t>(y) * g.width + x];
        const int b = q[static_cast<std::size_t>(yy) * g.width + xx];
        p[a * kLevels + b] += 1.0;
        p[b * kLevels + a] += 1.0;
        total += 2.0;
      }
    }
  }
  GlcmFeatures out;
  if (total <= 0.0) return out;
  for (int i = 0; i < kLevels; ++i) {
    for (int j = 0; j < kLevels; ++j) {
      const double pij = p[i * kLevels + j] / total;
      if (pij <= 0.0) continue;
      out.entropy -= pij * std::log2(pij);
      out.energy += pij * pij;
      out.contrast += (i - j) * (i - j) * pij;
      out.homogeneity += pij / (1.0 + std::abs(i - j));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Basic quality
// ---------------------------------------------------------------------------

// RMS distance between the frame and its histogram-equalized version.
inline double contrast_balance(const GrayFrame& g) {
  if (g.gray.empty()) return 0.0;
  const auto [mn, mx] = std::minmax_element(g.gray.begin(), g.gray.end());
  if (*mx - *mn < 1e-12f) return 0.0;  // single-bin histogram: equalization is identity
  constexpr int kBins = 256;
  const std::vector<double> hist = intensity_histogram(g.gray, kBins);
  std::array<double, kBins> cdf{};
  double acc = 0.0;
  for (int b = 0; b < kBins; ++b) {
    acc += hist[b];
    cdf[b] = acc;
  }
  double sum_sq = 0.0;
  for (const float v : g.gray) {
    const int b = std::clamp(static_cast<int>(v * kBins), 0, kBins - 1);
    const double d = static_cast<double>(v) - cdf[b];
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / static_cast<double>(g.pixels()));
}

// |skewness| of the luminance distribution; 0 for zero variance.
inline double exposure_balance(const GrayFrame& g) {
  if (g.gray.empty()) return 0.0;
  const double mean = detail::mean_of(g.gray);
  double m2 = 0.0, m3 = 0.0;
  for (const float v : g.gray) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(g.pixels());
  m2 /= n;
  m3 /= n;
  if (m2 < 1e-18) return 0.0;
  return std::abs(m3 / std::pow(m2, 1.5));
}

namespace detail {

struct DirectionalJpegStats {
  double blockiness = 0.0;
  double activity = 0.0;
  double zero_crossings = 0.0;
};

// Stats of one direction over the 0..255-scaled signal; `horizontal` walks
// rows, otherwise columns.
inline DirectionalJpegStats jpeg_direction_stats(const GrayFrame& g, bool horizontal) {
  const int w = g.width, h = g.height;
  const int lines = horizontal ? h : w;
  const int len = horizontal ? w : h;
  const auto sample = [&](int line, int pos) -> double {
    return 255.0 * (horizontal ? g.at(line, pos) : g.at(pos, line));
  };
  double abs_sum = 0.0, block_sum = 0.0, zc = 0.0;
  const int n_blocks = len / 8 - 1;
  for (int line = 0; line < lines; ++line) {
    double prev_d = 0.0;
    for (int pos = 0; pos + 1 < len; ++pos) {
      const double d = sample(line, pos + 1) - sample(line, pos);
      abs_sum += std::abs(d);
      if (pos > 0 && prev_d * d < 0.0) zc += 1.0;
      prev_d = d;
    }
    for (int m = 1; m <= n_blocks; ++m)
      block_sum += std::abs(sample(line, 8 * m) - sample(line, 8 * m - 1));
  }
  DirectionalJpegStats s;
  const double n_lines = static_cast<double>(lines);
  s.blockiness = n_blocks > 0 ? block_sum / (n_lines * n_blocks) : 0.0;
  const double mean_abs = abs_sum / (n_lines * (len - 1));
  s.activity = (8.0 / 7.0) * (mean_abs - s.blockiness);
  s.zero_crossings = zc / (n_lines * (len - 2));
  return s;
}

}  // namespace detail

// No-reference JPEG quality score S = alpha + beta * B^g1 * A^g2 * Z^g3 on
// 8x8 block boundaries. Degenerate statistics are clamped to 1e-6 so flat
// frames stay finite.
inline double jpeg_quality(const GrayFrame& g, const JpegQualityParams& params = {}) {
  if (g.width < 16 || g.height < 16) throw FrameTooSmall("jpeg_quality needs at least 16x16");
  const auto sh = detail::jpeg_direction_stats(g, true);
  const auto sv = detail::jpeg_direction_stats(g, false);
  const double b = std::max(0.5 * (sh.blockiness + sv.blockiness), 1e-6);
  const double a = std::max(0.5 * (sh.activity + sv.activity), 1e-6);
  const double z = std::max(0.5 * (sh.zero_crossings + sv.zero_crossings), 1e-6);
  return params.alpha + params.beta * std::pow(b, params.gamma1) * std::pow(a, params.gamma2) *
                            std::pow(z, params.gamma3);
}

// Mean Sobel gradient magnitude (resolution-comparable global sharpness).
inline double sharpness_sobel(const GrayFrame& g) {
  if (g.width < 3 || g.height < 3) throw FrameTooSmall("sobel needs at least 3x3");
  const int w = g.width, h = g.height;
  const auto px = [&](int y, int x) -> double {
    return g.at(std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1));
  };
  double sum = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (px(y - 1, x + 1) + 2 * px(y, x + 1) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2 * px(y, x - 1) + px(y + 1, x - 1));
      const double gy = (px(y + 1, x - 1) + 2 * px(y + 1, x) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2 * px(y - 1, x) + px(y - 1, x + 1));
      sum += std::sqrt(gx * gx + gy * gy);
    }
  }
  return sum / (static_cast<double>(w) * h);
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> to_spectrum_grid(const GrayFrame& g) {
  const GrayFrame small = resize_gray(g, kSpectrumSize, kSpectrumSize);
  std::vector<double> grid(small.gray.begin(), small.gray.end());
  return grid;
}

inline std::vector<double> log_amplitude_spectrum(const GrayFrame& g) {
  const std::vector<double> grid = to_spectrum_grid(g);
  std::vector<Complex> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = Complex(grid[i], 0.0);
  fft2_inplace(f, kSpectrumSize, false);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = std::log(1e-12 + std::abs(f[i]));
  return out;
}

inline std::vector<double> box3_filter(const std::vector<double>& src, int n) {
  std::vector<double> dst(src.size());
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double sum = 0.0;
      int cnt = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int yy = y + dy, xx = x + dx;
          if (yy < 0 || yy >= n || xx < 0 || xx >= n) continue;
          sum += src[static_cast<std::size_t>(yy) * n + xx];
          ++cnt;
        }
      }
      dst[static_cast<std::size_t>(y) * n + x] = sum / cnt;
    }
  }
  return dst;
}

inline std::vector<double> gaussian_blur(const std::vector<double>& src, int n, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(2.5 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double ksum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    ksum += kernel[i + radius];
  }
  for (double& k : kernel) k /= ksum;
  std::vector<double> tmp(src.size()), dst(src.size());
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      double sum = 0.0;
      for (int i = -radius; i <= radius; ++i)
        sum += kernel[i + radius] * src[static_cast<std::size_t>(y) * n + std::clamp(x + i, 0, n - 1)];
      tmp[static_cast<std::size_t>(y) * n + x] = sum;
    }
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      double sum = 0.0;
      for (int i = -radius; i <= radius; ++i)
        sum += kernel[i + radius] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, n - 1)) * n + x];
      dst[static_cast<std::size_t>(y) * n + x] = sum;
    }
  return dst;
}

}  // namespace detail

struct SaliencyMap {
  int width = 0;
  int height = 0;
  std::vector<float> map;  // [0,1]
};

// Spectral-residual saliency at the canonical 64x64 resolution, Gaussian
// smoothed, min-max normalized and upsampled back to the frame size.
// Constant frames map to an all-zero saliency map.
inline SaliencyMap spectral_saliency(const GrayFrame& g) {
  if (g.width < 8 || g.height < 8) throw FrameTooSmall("saliency needs at least 8x8");
  SaliencyMap out;
  out.width = g.width;
  out.height = g.height;
  out.map.assign(g.pixels(), 0.f);

  const auto [mn, mx] = std::minmax_element(g.gray.begin(), g.gray.end());
  if (*mx - *mn < 1e-12f) return out;  // zero-spectrum decision

  const std::vector<double> grid = detail::to_spectrum_grid(g);
  const int n = kSpectrumSize;
  std::vector<Complex> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = Complex(grid[i], 0.0);
  fft2_inplace(f, n, false);

  std::vector<double> log_amp(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) log_amp[i] = std::log(1e-12 + std::abs(f[i]));
  const std::vector<double> smoothed = detail::box3_filter(log_amp, n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double residual = log_amp[i] - smoothed[i];
    const double phase = std::arg(f[i]);
    f[i] = std::polar(std::exp(residual), phase);
  }
  fft2_inplace(f, n, true);
  std::vector<double> sal(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sal[i] = std::norm(f[i]);
  sal = detail::gaussian_blur(sal, n, 2.5);

  const auto [smn, smx] = std::minmax_element(sal.begin(), sal.end());
  const double range = *smx - *smn;
  std::vector<float> small(sal.size());
  for (std::size_t i = 0; i < sal.size(); ++i)
    small[i] = range > 0.0 ? static_cast<float>((sal[i] - *smn) / range) : 0.f;
  out.map = resize_bilinear(small, n, n, g.width, g.height, 1);
  for (float& v : out.map) v = std::clamp(v, 0.f, 1.f);
  return out;
}

// Mean saliency over a 3x3 grid of cells in row-major order.
inline std::array<double, 9> object_presence(const SaliencyMap& sal) {
  std::array<double, 9> out{};
  for (int cy = 0; cy < 3; ++cy) {
    const int y0 = cy * sal.height / 3, y1 = (cy + 1) * sal.height / 3;
    for (int cx = 0; cx < 3; ++cx) {
      const int x0 = cx * sal.width / 3, x1 = (cx + 1) * sal.width / 3;
      double sum = 0.0;
      int cnt = 0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
          sum += sal.map[static_cast<std::size_t>(y) * sal.width + x];
          ++cnt;
        }
      out[cy * 3 + cx] = cnt ? sum / cnt : 0.0;
    }
  }
  return out;
}

// Radially symmetric 1/f amplitude model, the fallback when no corpus prior
// has been built.
inline SpectrumPrior default_spectrum_prior() {
  SpectrumPrior prior;
  const int n = kSpectrumSize;
  prior.log_amplitude.resize(static_cast<std::size_t>(n) * n);
  const double dc_amp = n * n * 0.45;
  for (int v = 0; v < n; ++v) {
    const int fv = v <= n / 2 ? v : v - n;
    for (int u = 0; u < n; ++u) {
      const int fu = u <= n / 2 ? u : u - n;
      const double rho = std::sqrt(static_cast<double>(fu) * fu + static_cast<double>(fv) * fv);
      const double amp = rho == 0.0 ? dc_amp : dc_amp / (8.0 * rho);
      prior.log_amplitude[static_cast<std::size_t>(v) * n + u] = std::log(1e-12 + amp);
    }
  }
  return prior;
}

inline SpectrumPrior build_spectrum_prior(const std::vector<GrayFrame>& corpus) {
  if (corpus.empty()) throw EmptyCorpus("spectrum prior needs at least one frame");
  SpectrumPrior prior;
  prior.log_amplitude.assign(static_cast<std::size_t>(kSpectrumSize) * kSpectrumSize, 0.0);
  for (const auto& g : corpus) {
    const std::vector<double> spec = detail::log_amplitude_spectrum(g);
    for (std::size_t i = 0; i < spec.size(); ++i) prior.log_amplitude[i] += spec[i];
  }
  for (double& v : prior.log_amplitude) v /= static_cast<double>(corpus.size());
  return prior;
}

// RMS distance between the frame's log-amplitude spectrum and the prior.
inline double uniqueness(const GrayFrame& g, const SpectrumPrior& prior) {
  const std::vector<double> spec = detail::log_amplitude_spectrum(g);
  if (spec.size() != prior.log_amplitude.size())
    throw DimensionMismatch("spectrum prior has the wrong shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double d = spec[i] - prior.log_amplitude[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(spec.size()));
}

namespace detail {

// Dalal-Triggs style HOG: 9 unsigned orientation bins, 8x8 cells, L2-normalized
// 2x2 blocks (single cells when the grid is too small).
inline std::vector<double> hog_vector(const GrayFrame& g) {
  constexpr int kCell = 8;
  constexpr int kBins = 9;
  const int cells_x = g.width / kCell;
  const int cells_y = g.height / kCell;
  if (cells_x < 1 || cells_y < 1) throw FrameTooSmall("hog needs at least one 8x8 cell");
  const GradientField grad = compute_gradients(g);
  std::vector<double> cells(static_cast<std::size_t>(cells_x) * cells_y * kBins, 0.0);
  for (int y = 0; y < cells_y * kCell; ++y) {
    for (int x = 0; x < cells_x * kCell; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * g.width + x;
      const double mag = grad.mag(i);
      if (mag <= 0.0) continue;
      double theta = std::atan2(grad.gy[i], grad.gx[i]);
      if (theta < 0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      const int bin = std::min(kBins - 1, static_cast<int>(theta / std::numbers::pi * kBins));
      const std::size_t cell =
          (static_cast<std::size_t>(y / kCell) * cells_x + x / kCell) * kBins;
      cells[cell + bin] += mag;
    }
  }
  std::vector<double> out;
  const auto append_normalized = [&out](const double* v, int n) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += v[i] * v[i];
    norm = std::sqrt(norm + 1e-10);
    for (int i = 0; i < n; ++i) out.push_back(v[i] / norm);
  };
  if (cells_x < 2 || cells_y < 2) {
    for (int cy = 0; cy < cells_y; ++cy)
      for (int cx = 0; cx < cells_x; ++cx)
        append_normalized(&cells[(static_cast<std::size_t>(cy) * cells_x + cx) * kBins], kBins);
    return out;
  }
  std::vector<double> block(4 * kBins);
  for (int cy = 0; cy + 1 < cells_y; ++cy) {
    for (int cx = 0; cx + 1 < cells_x; ++cx) {
      int k = 0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx)
          for (int b = 0; b < kBins; ++b)
            block[k++] =
                cells[(static_cast<std::size_t>(cy + dy) * cells_x + (cx + dx)) * kBins + b];
      append_normalized(block.data(), 4 * kBins);
    }
  }
  return out;
}

inline GrayFrame crop_columns(const GrayFrame& g, int x0, int x1) {
  GrayFrame out;
  out.index = g.index;
  out.width = x1 - x0;
  out.height = g.height;
  out.gray.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < g.height; ++y)
    for (int x = x0; x < x1; ++x) out.at(y, x - x0) = g.at(y, x);
  return out;
}

inline GrayFrame hflip(const GrayFrame& g) {
  GrayFrame out = g;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) out.at(y, x) = g.at(y, g.width - 1 - x);
  return out;
}

}  // namespace detail

// L2 distance between HOG vectors of the left half and the mirrored right
// half; mirroring makes geometric left-right symmetry score exactly 0.
inline double symmetry(const GrayFrame& g) {
  if (g.width < 16 || g.height < 8) throw FrameTooSmall("symmetry needs at least 16x8");
  const int half = g.width / 2;
  const GrayFrame left = detail::crop_columns(g, 0, half);
  const GrayFrame right = detail::hflip(detail::crop_columns(g, g.width - half, g.width));
  const std::vector<double> a = detail::hog_vector(left);
  const std::vector<double> b = detail::hog_vector(right);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Motion
// ---------------------------------------------------------------------------

// stillness = 1 / (1 + SSD/pixels), in (0,1]; identical frames score 1.
inline double stillness(const GrayFrame& prev, const GrayFrame& cur) {
  if (prev.width != cur.width || prev.height != cur.height)
    throw DimensionMismatch("stillness: frame sizes differ");
  double ssd = 0.0;
  for (std::size_t i = 0; i < prev.pixels(); ++i) {
    const double d = static_cast<double>(cur.gray[i]) - prev.gray[i];
    ssd += d * d;
  }
  return 1.0 / (1.0 + ssd / static_cast<double>(prev.pixels()));
}

// stillness[i] compares frame i against frame i-1; the first frame of a
// stream is compared against itself (scores 1).
inline std::vector<double> stillness_series(const std::vector<GrayFrame>& grays, int threads = 0) {
  std::vector<double> out(grays.size(), 1.0);
  if (grays.size() < 2) return out;
  parallel_for(grays.size() - 1, threads, [&](std::size_t i) {
    out[i + 1] = stillness(grays[i], grays[i + 1]);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

inline AestheticVector compute_aesthetic_vector(const Frame& frame, const SpectrumPrior& prior,
                                                const JpegQualityParams& jpeg_params = {}) {
  const GrayFrame gray = to_gray(frame);
  const HsvFrame hsv = to_hsv(frame);

  AestheticVector av;
  av.index = frame.index;
  av.vector.reserve(kAestheticDims);
  av.vector.push_back(contrast_feature(gray));
  const std::vector<double> color = hsv_stats(hsv);
  av.vector.insert(av.vector.end(), color.begin(), color.end());
  const GlcmFeatures glcm = glcm_features(gray);
  av.vector.push_back(glcm.entropy);
  av.vector.push_back(glcm.energy);
  av.vector.push_back(glcm.contrast);
  av.vector.push_back(glcm.homogeneity);
  av.vector.push_back(contrast_balance(gray));
  av.vector.push_back(exposure_balance(gray));
  av.vector.push_back(jpeg_quality(gray, jpeg_params));
  av.vector.push_back(sharpness_sobel(gray));
  const std::array<double, 9> presence = object_presence(spectral_saliency(gray));
  av.vector.insert(av.vector.end(), presence.begin(), presence.end());
  av.vector.push_back(uniqueness(gray, prior));
  av.vector.push_back(symmetry(gray));
  if (av.vector.size() != kAestheticDims)
    throw DimensionMismatch("aesthetic vector is not 52-dimensional");
  return av;
}

inline std::vector<AestheticVector> compute_aesthetic_vectors(const std::vector<Frame>& frames,
                                                              const SpectrumPrior& prior,
                                                              int threads = 0) {
  std::vector<AestheticVector> out(frames.size());
  parallel_for(frames.size(), threads, [&](std::size_t i) {
    out[i] = compute_aesthetic_vector(frames[i], prior);
  });
  return out;
}

}  // namespace thumbforge
