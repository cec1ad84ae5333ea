/*
 * ThumbForge Video Thumbnail Library - Frame I/O tests
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "thumbforge/frame_io.hpp"

using namespace thumbforge;

namespace {

std::string y4m_bytes(const std::string& header, const std::string& body) {
  return header + body;
}

std::string c444_frame(int w, int h, std::uint8_t y, std::uint8_t u, std::uint8_t v) {
  std::string data = "FRAME\n";
  data += std::string(static_cast<std::size_t>(w) * h, static_cast<char>(y));
  data += std::string(static_cast<std::size_t>(w) * h, static_cast<char>(u));
  data += std::string(static_cast<std::size_t>(w) * h, static_cast<char>(v));
  return data;
}

}  // namespace

TEST_CASE("y4m header parses the required tokens") {
  std::istringstream in("YUV4MPEG2 W320 H240 F30:1 C420\nrest");
  const StreamInfo info = parse_y4m_header(in);
  CHECK(info.width == 320);
  CHECK(info.height == 240);
  CHECK(info.fps_num == 30);
  CHECK(info.fps_den == 1);
  CHECK(info.colorspace == Colorspace::C420);
}

TEST_CASE("y4m header minimal legal form") {
  std::istringstream in("YUV4MPEG2 W2 H2 F1:1 C444\n");
  const StreamInfo info = parse_y4m_header(in);
  CHECK(info.width == 2);
  CHECK(info.height == 2);
  CHECK(info.fps_num == 1);
  CHECK(info.colorspace == Colorspace::C444);
}

TEST_CASE("y4m header errors") {
  SECTION("missing width token") {
    std::istringstream in("YUV4MPEG2 H240 F30:1\n");
    CHECK_THROWS_AS(parse_y4m_header(in), MalformedHeader);
  }
  SECTION("missing magic") {
    std::istringstream in("JUNK W2 H2 F1:1\n");
    CHECK_THROWS_AS(parse_y4m_header(in), MalformedHeader);
  }
  SECTION("unsupported colorspace") {
    std::istringstream in("YUV4MPEG2 W2 H2 F1:1 Cmono\n");
    CHECK_THROWS_AS(parse_y4m_header(in), UnsupportedColorspace);
  }
  SECTION("c420 family variants are accepted") {
    std::istringstream in("YUV4MPEG2 W2 H2 F1:1 C420jpeg\n");
    CHECK(parse_y4m_header(in).colorspace == Colorspace::C420);
  }
}

TEST_CASE("y4m decodes BT.601 black and white points") {
  const std::string header = "YUV4MPEG2 W4 H2 F25:1 C444\n";
  std::istringstream in(
      y4m_bytes(header, c444_frame(4, 2, 0, 128, 128) + c444_frame(4, 2, 255, 128, 128)));
  Y4mSource src(in);

  const auto black = src.next();
  REQUIRE(black.has_value());
  for (const float v : black->rgb) CHECK(v == Catch::Approx(0.0).margin(0.01));
  CHECK(black->index == 0);
  CHECK(black->timestamp == Catch::Approx(0.0));

  const auto white = src.next();
  REQUIRE(white.has_value());
  for (const float v : white->rgb) CHECK(v == Catch::Approx(1.0).margin(0.01));
  CHECK(white->index == 1);
  CHECK(white->timestamp == Catch::Approx(1.0 / 25.0));

  CHECK_FALSE(src.next().has_value());  // clean end-of-stream
}

TEST_CASE("y4m stream ending right after the header yields zero frames") {
  std::istringstream in("YUV4MPEG2 W4 H4 F30:1 C420\n");
  Y4mSource src(in);
  CHECK_FALSE(src.next().has_value());
}

TEST_CASE("y4m frame errors") {
  const std::string header = "YUV4MPEG2 W4 H2 F25:1 C444\n";
  SECTION("truncated plane data") {
    std::istringstream in(header + "FRAME\nshort");
    Y4mSource src(in);
    CHECK_THROWS_AS(src.next(), TruncatedFrame);
  }
  SECTION("bad frame marker") {
    std::istringstream in(header + "GARBAGE\n");
    Y4mSource src(in);
    CHECK_THROWS_AS(src.next(), MalformedFrameMarker);
  }
}

TEST_CASE("y4m chroma subsampling replicates nearest neighbors") {
  // C420: 2x2 image, one chroma sample; red-ish chroma over constant luma.
  const std::string header = "YUV4MPEG2 W2 H2 F1:1 C420\n";
  std::string body = "FRAME\n";
  body += std::string(4, static_cast<char>(128));  // Y plane
  body += std::string(1, static_cast<char>(128));  // U
  body += std::string(1, static_cast<char>(255));  // V
  std::istringstream in(header + body);
  Y4mSource src(in);
  const auto f = src.next();
  REQUIRE(f.has_value());
  // All four pixels decode identically.
  for (int p = 1; p < 4; ++p)
    for (int c = 0; c < 3; ++c) CHECK(f->rgb[p * 3 + c] == f->rgb[c]);
  CHECK(f->rgb[0] > 0.9f);  // strong red
}

TEST_CASE("decoding is deterministic") {
  const auto frames = fixtures::cut_fixture({}, 4, 16, 16);
  const std::string path = std::filesystem::temp_directory_path() / "tf_det.y4m";
  fixtures::write_y4m(frames, path);
  Y4mSource a(path), b(path);
  const auto fa = a.read_all(), fb = b.read_all();
  REQUIRE(fa.size() == fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(fa[i].rgb == fb[i].rgb);
  std::remove(path.c_str());
}

TEST_CASE("gray conversion uses the relative-luminance weights") {
  CHECK(to_gray(fixtures::solid_frame(4, 4, 1, 1, 1)).gray[0] == Catch::Approx(1.0));
  CHECK(to_gray(fixtures::solid_frame(4, 4, 1, 0, 0)).gray[0] == Catch::Approx(0.2126));
  CHECK(to_gray(fixtures::solid_frame(4, 4, 0, 0, 1)).gray[0] == Catch::Approx(0.0722));
}

TEST_CASE("gray conversion is linear in frame intensity") {
  const Frame f = fixtures::textured_frame(16, 16, 7);
  Frame half = f;
  for (auto& v : half.rgb) v *= 0.5f;
  const GrayFrame g = to_gray(f), gh = to_gray(half);
  for (std::size_t i = 0; i < g.gray.size(); ++i)
    CHECK(gh.gray[i] == Catch::Approx(0.5 * g.gray[i]).margin(1e-6));
}

TEST_CASE("hsv conversion canonical values") {
  const HsvFrame red = to_hsv(fixtures::solid_frame(2, 2, 1, 0, 0));
  CHECK(red.h[0] == Catch::Approx(0.0));
  CHECK(red.s[0] == Catch::Approx(1.0));
  CHECK(red.v[0] == Catch::Approx(1.0));

  const HsvFrame gray = to_hsv(fixtures::solid_frame(2, 2, 0.5f, 0.5f, 0.5f));
  CHECK(gray.h[0] == Catch::Approx(0.0));
  CHECK(gray.s[0] == Catch::Approx(0.0));
  CHECK(gray.v[0] == Catch::Approx(0.5));

  const HsvFrame green = to_hsv(fixtures::solid_frame(2, 2, 0, 1, 0));
  CHECK(green.h[0] == Catch::Approx(1.0 / 3.0));
  CHECK(green.s[0] == Catch::Approx(1.0));
  CHECK(green.v[0] == Catch::Approx(1.0));
}

TEST_CASE("hsv round-trip reproduces rgb within 1e-6") {
  Rng rng(99);
  Frame f;
  f.width = 1000;
  f.height = 1;
  f.rgb.resize(3000);
  for (auto& v : f.rgb) v = static_cast<float>(rng.uniform());
  const Frame back = hsv_to_rgb(to_hsv(f));
  float max_err = 0.f;
  for (std::size_t i = 0; i < f.rgb.size(); ++i)
    max_err = std::max(max_err, std::abs(back.rgb[i] - f.rgb[i]));
  CHECK(max_err <= 1e-6f);
}

TEST_CASE("raw rgb source reads packed frames and flags truncation") {
  std::string bytes;
  for (int i = 0; i < 2 * 2 * 3; ++i) bytes.push_back(static_cast<char>(255));
  bytes += std::string(5, '\0');  // half a frame
  std::istringstream in(bytes);
  RawRgbSource src(in, 2, 2, 10);
  const auto f = src.next();
  REQUIRE(f.has_value());
  CHECK(f->rgb[0] == 1.0f);
  CHECK(f->timestamp == Catch::Approx(0.0));
  CHECK_THROWS_AS(src.next(), TruncatedFrame);
}

TEST_CASE("ppm round-trip and image directory ordering") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tf_ppm_dir";
  fs::create_directories(dir);
  const Frame a = fixtures::textured_frame(12, 8, 3, 0);
  const Frame b = fixtures::solid_frame(12, 8, 1, 0, 0, 1);
  write_ppm(b, (dir / "b_frame.ppm").string());
  write_ppm(a, (dir / "a_frame.ppm").string());

  ImageDirSource src(dir.string(), 10);
  CHECK(src.info().width == 12);
  const auto frames = src.read_all();
  REQUIRE(frames.size() == 2);
  // Lexicographic order: a_frame first.
  CHECK(frames[0].rgb[0] == Catch::Approx(a.rgb[0]).margin(1.0 / 255));
  CHECK(frames[1].rgb[0] == Catch::Approx(1.0).margin(1.0 / 255));
  CHECK(frames[1].index == 1);
  CHECK(frames[1].timestamp == Catch::Approx(0.1));
  fs::remove_all(dir);
}

TEST_CASE("frame indices are gapless over a stream") {
  const auto frames = fixtures::cut_fixture({}, 12, 16, 16);
  const std::string path = std::filesystem::temp_directory_path() / "tf_gapless.y4m";
  fixtures::write_y4m(frames, path);
  Y4mSource src(path);
  const auto decoded = src.read_all();
  REQUIRE(decoded.size() == 12);
  for (int i = 0; i < 12; ++i) {
    CHECK(decoded[i].index == i);
    if (i > 0) CHECK(decoded[i].timestamp > decoded[i - 1].timestamp);
  }
  std::remove(path.c_str());
}
