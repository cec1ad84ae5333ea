/*
 * ThumbForge Video Thumbnail Library - Frame I/O
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thumbforge/common.hpp"

namespace thumbforge {

// ---------------------------------------------------------------------------
// Stream metadata and frame types. Channel values are normalized to [0,1]
// at ingest; every downstream formula assumes normalized intensities.
// ---------------------------------------------------------------------------

enum class Colorspace { C420, C422, C444, RGB24 };
enum class SourceKind { y4m, raw, imagedir };

struct StreamInfo {
  int width = 0;
  int height = 0;
  int fps_num = 30;
  int fps_den = 1;
  Colorspace colorspace = Colorspace::C420;
  SourceKind source = SourceKind::y4m;

  double fps() const { return static_cast<double>(fps_num) / fps_den; }
};

struct Frame {
  int index = 0;
  double timestamp = 0.0;  // seconds; index * fps_den / fps_num
  int width = 0;
  int height = 0;
  std::vector<float> rgb;  // row-major H x W x 3

  float& at(int y, int x, int c) { return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  float at(int y, int x, int c) const { return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
};

struct GrayFrame {
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<float> gray;  // row-major H x W

  float& at(int y, int x) { return gray[static_cast<std::size_t>(y) * width + x]; }
  float at(int y, int x) const { return gray[static_cast<std::size_t>(y) * width + x]; }
  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
};

struct HsvFrame {
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<float> h, s, v;  // each row-major H x W; h in [0,1) wraps

  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
};

// Relative-luminance weights shared by the luminance score and gray
// conversion, so both filtering formulas use one luminance definition.
inline constexpr double kLumaR = 0.2126;
inline constexpr double kLumaG = 0.7152;
inline constexpr double kLumaB = 0.0722;

inline GrayFrame to_gray(const Frame& f) {
  GrayFrame g;
  g.index = f.index;
  g.width = f.width;
  g.height = f.height;
  g.gray.resize(f.pixels());
  for (std::size_t i = 0; i < f.pixels(); ++i) {
    const float* p = &f.rgb[i * 3];
    g.gray[i] = static_cast<float>(kLumaR * p[0] + kLumaG * p[1] + kLumaB * p[2]);
  }
  return g;
}

// Standard hexcone HSV; hue of achromatic pixels is defined as 0.
inline HsvFrame to_hsv(const Frame& f) {
  HsvFrame o;
  o.index = f.index;
  o.width = f.width;
  o.height = f.height;
  o.h.resize(f.pixels());
  o.s.resize(f.pixels());
  o.v.resize(f.pixels());
  for (std::size_t i = 0; i < f.pixels(); ++i) {
    const float r = f.rgb[i * 3], g = f.rgb[i * 3 + 1], b = f.rgb[i * 3 + 2];
    const float mx = std::max({r, g, b});
    const float mn = std::min({r, g, b});
    const float d = mx - mn;
    float h = 0.f;
    if (d > 0.f) {
      if (mx == r)
        h = (g - b) / d;
      else if (mx == g)
        h = 2.f + (b - r) / d;
      else
        h = 4.f + (r - g) / d;
      h /= 6.f;
      if (h < 0.f) h += 1.f;
      if (h >= 1.f) h -= 1.f;
    }
    o.h[i] = h;
    o.s[i] = mx > 0.f ? d / mx : 0.f;
    o.v[i] = mx;
  }
  return o;
}

inline void hsv_to_rgb(float h, float s, float v, float& r, float& g, float& b) {
  if (s <= 0.f) {
    r = g = b = v;
    return;
  }
  h -= std::floor(h);
  const float x = h * 6.f;
  const int sector = std::min(5, static_cast<int>(x));
  const float f = x - sector;
  const float p = v * (1.f - s);
  const float q = v * (1.f - s * f);
  const float t = v * (1.f - s * (1.f - f));
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
}

inline Frame hsv_to_rgb(const HsvFrame& f) {
  Frame o;
  o.index = f.index;
  o.width = f.width;
  o.height = f.height;
  o.rgb.resize(f.pixels() * 3);
  for (std::size_t i = 0; i < f.pixels(); ++i)
    hsv_to_rgb(f.h[i], f.s[i], f.v[i], o.rgb[i * 3], o.rgb[i * 3 + 1], o.rgb[i * 3 + 2]);
  return o;
}

// ---------------------------------------------------------------------------
// Bilinear resize helpers (used by the evaluation matcher and aesthetics).
// ---------------------------------------------------------------------------

inline std::vector<float> resize_bilinear(const std::vector<float>& src, int sw, int sh,
                                          int dw, int dh, int channels) {
  std::vector<float> dst(static_cast<std::size_t>(dw) * dh * channels);
  const double sx = static_cast<double>(sw) / dw;
  const double sy = static_cast<double>(sh) / dh;
  for (int y = 0; y < dh; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    const double wy = fy - y0;
    int y1 = std::min(y0 + 1, sh - 1);
    y0 = std::clamp(y0, 0, sh - 1);
    for (int x = 0; x < dw; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      const double wx = fx - x0;
      int x1 = std::min(x0 + 1, sw - 1);
      x0 = std::clamp(x0, 0, sw - 1);
      for (int c = 0; c < channels; ++c) {
        const auto px = [&](int yy, int xx) {
          return static_cast<double>(src[(static_cast<std::size_t>(yy) * sw + xx) * channels + c]);
        };
        const double top = px(y0, x0) * (1 - wx) + px(y0, x1) * wx;
        const double bot = px(y1, x0) * (1 - wx) + px(y1, x1) * wx;
        dst[(static_cast<std::size_t>(y) * dw + x) * channels + c] =
            static_cast<float>(top * (1 - wy) + bot * wy);
      }
    }
  }
  return dst;
}

inline GrayFrame resize_gray(const GrayFrame& g, int dw, int dh) {
  GrayFrame o;
  o.index = g.index;
  o.width = dw;
  o.height = dh;
  o.gray = resize_bilinear(g.gray, g.width, g.height, dw, dh, 1);
  return o;
}

// ---------------------------------------------------------------------------
// Y4M parsing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string read_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeader("unexpected end of stream in header");
  return line;
}

}  // namespace detail

// Parses a YUV4MPEG2 header line and leaves the stream positioned at the
// first FRAME marker. Required tokens: W, H, F. C defaults to C420.
inline StreamInfo parse_y4m_header(std::istream& in) {
  std::string line = detail::read_line(in);
  std::istringstream tokens(line);
  std::string magic;
  tokens >> magic;
  if (magic != "YUV4MPEG2") throw MalformedHeader("missing YUV4MPEG2 signature");

  StreamInfo info;
  info.source = SourceKind::y4m;
  bool have_w = false, have_h = false, have_f = false;
  std::string tok;
  while (tokens >> tok) {
    if (tok.empty()) continue;
    const char tag = tok[0];
    const std::string val = tok.substr(1);
    switch (tag) {
      case 'W':
        info.width = std::atoi(val.c_str());
        have_w = true;
        break;
      case 'H':
        info.height = std::atoi(val.c_str());
        have_h = true;
        break;
      case 'F': {
        const auto colon = val.find(':');
        if (colon == std::string::npos) throw MalformedHeader("bad F token: " + tok);
        info.fps_num = std::atoi(val.substr(0, colon).c_str());
        info.fps_den = std::atoi(val.substr(colon + 1).c_str());
        have_f = true;
        break;
      }
      case 'C':
        if (val == "444")
          info.colorspace = Colorspace::C444;
        else if (val == "422")
          info.colorspace = Colorspace::C422;
        else if (val.rfind("420", 0) == 0)  // 420, 420jpeg, 420mpeg2, 420paldv
          info.colorspace = Colorspace::C420;
        else
          throw UnsupportedColorspace("colorspace C" + val);
        break;
      case 'I':
      case 'A':
      case 'X':
        break;  // interlacing / aspect / comments: accepted, ignored
      default:
        break;
    }
  }
  if (!have_w || !have_h || !have_f)
    throw MalformedHeader("header must carry W, H and F tokens");
  if (info.width <= 0 || info.height <= 0 || info.fps_num <= 0 || info.fps_den <= 0)
    throw MalformedHeader("non-positive dimension or frame rate");
  return info;
}

namespace detail {

// BT.601 full-range YUV -> RGB, planes normalized to [0,1].
inline void yuv_to_rgb(double y, double u, double v, float& r, float& g, float& b) {
  u -= 0.5;
  v -= 0.5;
  const double rd = y + 1.402 * v;
  const double gd = y - 0.344136 * u - 0.714136 * v;
  const double bd = y + 1.772 * u;
  r = static_cast<float>(std::clamp(rd, 0.0, 1.0));
  g = static_cast<float>(std::clamp(gd, 0.0, 1.0));
  b = static_cast<float>(std::clamp(bd, 0.0, 1.0));
}

}  // namespace detail

// Reads the next frame from a Y4M stream. Returns nullopt on a clean
// end-of-stream; throws on malformed markers or truncated planes.
inline std::optional<Frame> next_y4m_frame(std::istream& in, const StreamInfo& info,
                                           int next_index) {
  std::string marker;
  if (!std::getline(in, marker)) return std::nullopt;  // clean EOF
  if (marker.rfind("FRAME", 0) != 0)
    throw MalformedFrameMarker("expected FRAME marker, got: " + marker.substr(0, 16));

  const int w = info.width, h = info.height;
  int cw = w, ch = h;
  if (info.colorspace == Colorspace::C420) {
    cw = (w + 1) / 2;
    ch = (h + 1) / 2;
  } else if (info.colorspace == Colorspace::C422) {
    cw = (w + 1) / 2;
  }
  const std::size_t ysz = static_cast<std::size_t>(w) * h;
  const std::size_t csz = static_cast<std::size_t>(cw) * ch;

  std::vector<std::uint8_t> planes(ysz + 2 * csz);
  in.read(reinterpret_cast<char*>(planes.data()), static_cast<std::streamsize>(planes.size()));
  if (static_cast<std::size_t>(in.gcount()) != planes.size())
    throw TruncatedFrame("frame " + std::to_string(next_index) + " is short");

  Frame f;
  f.index = next_index;
  f.timestamp = static_cast<double>(next_index) * info.fps_den / info.fps_num;
  f.width = w;
  f.height = h;
  f.rgb.resize(ysz * 3);
  const std::uint8_t* yp = planes.data();
  const std::uint8_t* up = planes.data() + ysz;
  const std::uint8_t* vp = planes.data() + ysz + csz;
  for (int y = 0; y < h; ++y) {
    // Nearest-neighbor chroma replication for subsampled colorspaces.
    const int cy = info.colorspace == Colorspace::C420 ? y / 2 : y;
    for (int x = 0; x < w; ++x) {
      const int cx = info.colorspace == Colorspace::C444 ? x : x / 2;
      const double yy = yp[static_cast<std::size_t>(y) * w + x] / 255.0;
      const double uu = up[static_cast<std::size_t>(cy) * cw + cx] / 255.0;
      const double vv = vp[static_cast<std::size_t>(cy) * cw + cx] / 255.0;
      detail::yuv_to_rgb(yy, uu, vv, f.at(y, x, 0), f.at(y, x, 1), f.at(y, x, 2));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// PPM (P6, maxval 255)
// ---------------------------------------------------------------------------

inline Frame read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P6") throw MalformedHeader("not a P6 PPM: " + path);
  const auto next_int = [&in, &path]() {
    // Skip whitespace and '#' comment lines between header fields.
    for (;;) {
      const int c = in.peek();
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (c != std::char_traits<char>::eof() && std::isspace(static_cast<unsigned char>(c))) {
        in.get();
      } else {
        break;
      }
    }
    int v = -1;
    in >> v;
    if (!in) throw MalformedHeader("bad PPM header in " + path);
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw MalformedHeader("unsupported PPM geometry in " + path);
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw TruncatedFrame("short pixel data in " + path);
  Frame f;
  f.width = w;
  f.height = h;
  f.rgb.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i)
    f.rgb[i] = static_cast<float>(buf[i]) / static_cast<float>(maxval);
  return f;
}

inline void write_ppm(const Frame& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot write " + path);
  out << "P6\n" << f.width << " " << f.height << "\n255\n";
  std::vector<std::uint8_t> buf(f.rgb.size());
  for (std::size_t i = 0; i < f.rgb.size(); ++i) {
    const float v = std::clamp(f.rgb[i], 0.f, 1.f);
    buf[i] = static_cast<std::uint8_t>(std::lround(v * 255.f));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

// ---------------------------------------------------------------------------
// Frame sources: a uniform pull interface over Y4M streams, raw RGB24 pipes
// and PPM image directories. Reading is strictly sequential; decoded Frames
// are immutable and safe to hand to concurrent consumers.
// ---------------------------------------------------------------------------

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual const StreamInfo& info() const = 0;
  virtual std::optional<Frame> next() = 0;

  std::vector<Frame> read_all(std::size_t max_frames = 0) {
    std::vector<Frame> frames;
    while (auto f = next()) {
      frames.push_back(std::move(*f));
      if (max_frames && frames.size() >= max_frames) break;
    }
    return frames;
  }
};

class Y4mSource final : public FrameSource {
 public:
  explicit Y4mSource(const std::string& path)
      : file_(std::make_unique<std::ifstream>(path, std::ios::binary)), in_(file_.get()) {
    if (!*file_) throw ManifestError("cannot open " + path);
    info_ = parse_y4m_header(*in_);
  }
  explicit Y4mSource(std::istream& in) : in_(&in) { info_ = parse_y4m_header(*in_); }

  const StreamInfo& info() const override { return info_; }
  std::optional<Frame> next() override { return next_y4m_frame(*in_, info_, next_index_++); }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* in_;
  StreamInfo info_;
  int next_index_ = 0;
};

class RawRgbSource final : public FrameSource {
 public:
  RawRgbSource(const std::string& path, int width, int height, int fps_num, int fps_den = 1)
      : file_(std::make_unique<std::ifstream>(path, std::ios::binary)), in_(file_.get()) {
    if (!*file_) throw ManifestError("cannot open " + path);
    init(width, height, fps_num, fps_den);
  }
  RawRgbSource(std::istream& in, int width, int height, int fps_num, int fps_den = 1)
      : in_(&in) {
    init(width, height, fps_num, fps_den);
  }

  const StreamInfo& info() const override { return info_; }

  std::optional<Frame> next() override {
    const std::size_t sz = static_cast<std::size_t>(info_.width) * info_.height * 3;
    std::vector<std::uint8_t> buf(sz);
    in_->read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(sz));
    const auto got = static_cast<std::size_t>(in_->gcount());
    if (got == 0) return std::nullopt;
    if (got != sz) throw TruncatedFrame("raw frame " + std::to_string(next_index_) + " is short");
    Frame f;
    f.index = next_index_;
    f.timestamp = static_cast<double>(next_index_) * info_.fps_den / info_.fps_num;
    ++next_index_;
    f.width = info_.width;
    f.height = info_.height;
    f.rgb.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) f.rgb[i] = static_cast<float>(buf[i]) / 255.f;
    return f;
  }

 private:
  void init(int width, int height, int fps_num, int fps_den) {
    if (width <= 0 || height <= 0 || fps_num <= 0 || fps_den <= 0)
      throw MalformedHeader("raw source needs positive width/height/fps");
    info_.width = width;
    info_.height = height;
    info_.fps_num = fps_num;
    info_.fps_den = fps_den;
    info_.colorspace = Colorspace::RGB24;
    info_.source = SourceKind::raw;
  }

  std::unique_ptr<std::ifstream> file_;
  std::istream* in_;
  StreamInfo info_;
  int next_index_ = 0;
};

// Frames ordered by lexicographic filename; PPM only.
class ImageDirSource final : public FrameSource {
 public:
  explicit ImageDirSource(const std::string& dir, int fps_num = 30, int fps_den = 1) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ManifestError("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (ext == ".ppm") paths_.push_back(entry.path().string());
    }
    std::sort(paths_.begin(), paths_.end());
    info_.fps_num = fps_num;
    info_.fps_den = fps_den;
    info_.colorspace = Colorspace::RGB24;
    info_.source = SourceKind::imagedir;
    if (!paths_.empty()) {
      const Frame first = read_ppm(paths_.front());
      info_.width = first.width;
      info_.height = first.height;
    }
  }

  const StreamInfo& info() const override { return info_; }

  std::optional<Frame> next() override {
    if (next_index_ >= static_cast<int>(paths_.size())) return std::nullopt;
    Frame f = read_ppm(paths_[next_index_]);
    if (f.width != info_.width || f.height != info_.height)
      throw DimensionMismatch("frame size changes at " + paths_[next_index_]);
    f.index = next_index_;
    f.timestamp = static_cast<double>(next_index_) * info_.fps_den / info_.fps_num;
    ++next_index_;
    return f;
  }

 private:
  std::vector<std::string> paths_;
  StreamInfo info_;
  int next_index_ = 0;
};

}  // namespace thumbforge
