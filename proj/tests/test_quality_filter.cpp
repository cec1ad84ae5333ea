/*
 * ThumbForge Video Thumbnail Library - Quality filter tests
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "thumbforge/quality_filter.hpp"

using namespace thumbforge;

TEST_CASE("luminance score on flat and split frames") {
  CHECK(luminance_score(fixtures::gray_frame(8, 8, 0.f)) == Catch::Approx(0.0));
  CHECK(luminance_score(fixtures::gray_frame(8, 8, 1.f)) == Catch::Approx(1.0));
  const Frame split = fixtures::frame_from_gray_fn(8, 8, [](int x, int) {
    return x < 4 ? 1.0 : 0.0;
  });
  CHECK(luminance_score(split) == Catch::Approx(0.5));
}

TEST_CASE("sharpness of a constant frame is zero") {
  CHECK(sharpness_score(fixtures::gray_of(fixtures::gray_frame(8, 8, 0.3f))) ==
        Catch::Approx(0.0));
}

TEST_CASE("sharpness of a linear ramp is the analytic gradient") {
  const int w = 17, h = 9;
  const Frame ramp =
      fixtures::frame_from_gray_fn(w, h, [&](int x, int) { return x / double(w - 1); });
  CHECK(sharpness_score(fixtures::gray_of(ramp)) == Catch::Approx(1.0 / (w - 1)).epsilon(1e-4));
}

TEST_CASE("sharpness rejects tiny frames") {
  CHECK_THROWS_AS(sharpness_score(fixtures::gray_of(fixtures::gray_frame(2, 2, 0.5f))),
                  FrameTooSmall);
}

TEST_CASE("checkerboard is sharper than its box-blurred copy") {
  const int n = 16;
  const Frame checker = fixtures::frame_from_gray_fn(n, n, [](int x, int y) {
    return (x + y) % 2 ? 1.0 : 0.0;
  });
  const GrayFrame g = fixtures::gray_of(checker);
  GrayFrame blurred = g;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      double sum = 0.0;
      int cnt = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int yy = y + dy, xx = x + dx;
          if (yy < 0 || yy >= n || xx < 0 || xx >= n) continue;
          sum += g.at(yy, xx);
          ++cnt;
        }
      blurred.at(y, x) = static_cast<float>(sum / cnt);
    }
  CHECK(sharpness_score(g) > sharpness_score(blurred));
}

TEST_CASE("uniformity score histogram identities") {
  CHECK(uniformity_score(fixtures::gray_of(fixtures::gray_frame(16, 16, 0.4f))) ==
        Catch::Approx(1.0));
  // 256 equispaced intensities, one per bin: top 13 of 256 equal bins.
  GrayFrame g;
  g.width = 256;
  g.height = 1;
  g.gray.resize(256);
  for (int i = 0; i < 256; ++i) g.gray[i] = static_cast<float>(i) / 255.f;
  CHECK(uniformity_score(g) == Catch::Approx(13.0 / 256.0));
  // Two-tone frame: both bins sit inside the top 13.
  const Frame two_tone = fixtures::frame_from_gray_fn(16, 16, [](int x, int) {
    return x < 8 ? 0.0 : 1.0;
  });
  CHECK(uniformity_score(fixtures::gray_of(two_tone)) == Catch::Approx(1.0));
}

TEST_CASE("edge change ratio basics") {
  const GrayFrame rect =
      fixtures::gray_of(fixtures::rectangle_frame(48, 32, 5));
  const GrayFrame flat = fixtures::gray_of(fixtures::gray_frame(48, 32, 0.5f));

  SECTION("identical frames") { CHECK(edge_change_ratio(rect, rect) == Catch::Approx(0.0)); }
  SECTION("edge-free to edge-rich is a full change") {
    CHECK(edge_change_ratio(flat, rect) == Catch::Approx(1.0));
  }
  SECTION("one-pixel shift is absorbed by dilation") {
    // A bright centered square, then the same square shifted one pixel.
    const auto square = [](int shift) {
      return fixtures::frame_from_gray_fn(48, 32, [shift](int x, int y) {
        return (x >= 12 + shift && x < 30 + shift && y >= 8 && y < 22) ? 0.9 : 0.1;
      });
    };
    CHECK(edge_change_ratio(fixtures::gray_of(square(0)), fixtures::gray_of(square(1))) ==
          Catch::Approx(0.0));
  }
  SECTION("symmetry under swap") {
    const GrayFrame other = fixtures::gray_of(fixtures::rectangle_frame(48, 32, 6));
    CHECK(edge_change_ratio(rect, other) == Catch::Approx(edge_change_ratio(other, rect)));
  }
  SECTION("dimension mismatch") {
    const GrayFrame small = fixtures::gray_of(fixtures::gray_frame(8, 8, 0.5f));
    CHECK_THROWS_AS(edge_change_ratio(rect, small), DimensionMismatch);
  }
}

TEST_CASE("shot boundaries found at planted cuts, none elsewhere") {
  const auto frames = fixtures::cut_fixture({25, 60, 90}, 120);
  std::vector<GrayFrame> grays;
  for (const auto& f : frames) grays.push_back(to_gray(f));
  const auto boundaries = detect_shot_boundaries(grays);
  REQUIRE(boundaries == std::vector<int>{25, 60, 90});
}

TEST_CASE("constant-content video has no boundaries") {
  const auto frames = fixtures::cut_fixture({}, 30);
  std::vector<GrayFrame> grays;
  for (const auto& f : frames) grays.push_back(to_gray(f));
  CHECK(detect_shot_boundaries(grays).empty());
}

TEST_CASE("adjacent over-threshold indices merge to the local maximum") {
  std::vector<double> ecr = {0.0, 0.1, 0.8, 0.9, 0.7, 0.1, 0.0, 0.6, 0.1};
  const auto boundaries = detect_shot_boundaries(ecr, 0.5);
  CHECK(boundaries == std::vector<int>{3, 7});
}

TEST_CASE("filter fixture drops exactly the planted frames") {
  const auto fx = fixtures::filter_fixture(60);
  const FrameMask mask = filter_frames(fx.frames, FilterConfig{});
  for (std::size_t i = 0; i < fx.frames.size(); ++i) {
    INFO("frame " << i);
    CHECK(static_cast<bool>(mask.keep[i]) == !fx.is_planted(static_cast<int>(i)));
  }
}

TEST_CASE("clean fixture keeps everything as one shot") {
  std::vector<Frame> frames;
  for (int i = 0; i < 100; ++i)
    frames.push_back(fixtures::textured_frame(96, 72, derive_seed(11, i), i));
  fixtures::reindex(frames);
  const FrameMask mask = filter_frames(frames, FilterConfig{});
  CHECK(mask.kept_count() == 100);
  REQUIRE(mask.shots.size() == 1);
  CHECK(mask.shots[0] == std::pair<int, int>(0, 99));
}

TEST_CASE("boundary margin removes frames around each cut") {
  const auto frames = fixtures::cut_fixture({25}, 50);
  FilterConfig cfg;
  const FrameMask mask = filter_frames(frames, cfg);
  for (int i = 0; i < 50; ++i) {
    const bool in_margin = i >= 25 - cfg.boundary_margin && i <= 25 + cfg.boundary_margin - 1;
    INFO("frame " << i);
    CHECK(static_cast<bool>(mask.keep[i]) == !in_margin);
  }
  REQUIRE(mask.shots.size() == 2);
  CHECK(mask.shots[0].first == 0);
  CHECK(mask.shots[1].second == 49);
}

TEST_CASE("all frames filtered raises the fallback signal") {
  std::vector<Frame> frames;
  for (int i = 0; i < 5; ++i) frames.push_back(fixtures::gray_frame(16, 16, 0.01f, i));
  CHECK_THROWS_AS(filter_frames(frames, FilterConfig{}), AllFramesFiltered);
}

TEST_CASE("raising luminance_min never increases the kept count") {
  const auto fx = fixtures::filter_fixture(40);
  int prev_kept = static_cast<int>(fx.frames.size()) + 1;
  for (const double lum : {0.0, 0.1, 0.3, 0.5, 0.7}) {
    FilterConfig cfg;
    cfg.luminance_min = lum;
    int kept = 0;
    try {
      kept = filter_frames(fx.frames, cfg).kept_count();
    } catch (const AllFramesFiltered&) {
      kept = 0;
    }
    CHECK(kept <= prev_kept);
    prev_kept = kept;
  }
}

TEST_CASE("every dropped frame has a recorded cause") {
  const auto fx = fixtures::filter_fixture(50);
  FilterConfig cfg;
  std::vector<GrayFrame> grays;
  for (const auto& f : fx.frames) grays.push_back(to_gray(f));
  const auto quality = compute_quality(fx.frames, grays);
  const auto boundaries = detect_shot_boundaries(grays, cfg);
  const FrameMask mask = filter_frames(quality, boundaries, fx.frames.size(), cfg);
  for (std::size_t i = 0; i < fx.frames.size(); ++i) {
    if (mask.keep[i]) continue;
    const bool fails_threshold = quality[i].luminance < cfg.luminance_min ||
                                 quality[i].sharpness < cfg.sharpness_min ||
                                 quality[i].uniformity > cfg.uniformity_max;
    bool near_boundary = false;
    for (const int b : boundaries)
      near_boundary |= static_cast<int>(i) >= b - cfg.boundary_margin &&
                       static_cast<int>(i) <= b + cfg.boundary_margin - 1;
    CHECK((fails_threshold || near_boundary));
  }
}

TEST_CASE("shot spans reconstruct the keep mask exactly") {
  const auto fx = fixtures::filter_fixture(80);
  const FrameMask mask = filter_frames(fx.frames, FilterConfig{});
  std::vector<char> rebuilt(mask.keep.size(), 0);
  for (const auto& [lo, hi] : mask.shots)
    for (int i = lo; i <= hi; ++i) rebuilt[i] = 1;
  CHECK(rebuilt == mask.keep);
}
