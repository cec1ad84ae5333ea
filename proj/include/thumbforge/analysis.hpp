/*
 * ThumbForge Video Thumbnail Library - Thumbnail feature analysis
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 *
 * Per-video rank quantiles of the 53 features for a designated thumbnail
 * frame, and chi-square goodness-of-fit tests against uniformity.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "thumbforge/aesthetics.hpp"
#include "thumbforge/common.hpp"
#include "thumbforge/evaluation.hpp"

namespace thumbforge {

// ---------------------------------------------------------------------------
// Regularized incomplete gamma (series + continued fraction), used for the
// chi-square upper tail.
// ---------------------------------------------------------------------------

namespace detail {

inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Upper regularized incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
inline double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw EmptyInput("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
inline double chi_square_p_value(double statistic, int dof) {
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

// ---------------------------------------------------------------------------
// Rank quantiles
// ---------------------------------------------------------------------------

// Quantile of the thumbnail's value among all non-excluded frames:
// (#strictly below + 0.5 #ties) / #comparison frames. `excluded` marks the
// thumbnail itself plus its near-duplicates.
inline double rank_quantile(const std::vector<double>& values, int thumb_index,
                            const std::vector<char>& excluded) {
  const double t = values[thumb_index];
  std::size_t below = 0, ties = 0, total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (excluded[i]) continue;
    ++total;
    if (values[i] < t)
      ++below;
    else if (values[i] == t)
      ++ties;
  }
  if (total == 0) throw NoComparisonFrames("every frame is a near-duplicate of the thumbnail");
  return (static_cast<double>(below) + 0.5 * static_cast<double>(ties)) /
         static_cast<double>(total);
}

struct ChiSquareResult {
  std::string feature;
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  double mean_quantile = 0.0;
  double std_quantile = 0.0;
  bool significant = false;      // p < 0.05
  bool too_few_samples = false;  // fewer than 5 expected per bin
};

// Goodness of fit of quantiles in [0,1] against the uniform distribution
// over `bins` equal intervals.
inline ChiSquareResult chi_square_uniform(const std::vector<double>& quantiles, int bins = 10) {
  if (quantiles.empty()) throw EmptyInput("chi_square_uniform: no samples");
  ChiSquareResult res;
  res.degrees_of_freedom = bins - 1;
  res.too_few_samples = static_cast<int>(quantiles.size()) < 5 * bins;
  std::vector<double> observed(bins, 0.0);
  for (const double q : quantiles) {
    int b = static_cast<int>(q * bins);
    b = std::clamp(b, 0, bins - 1);
    observed[b] += 1.0;
  }
  const double expected = static_cast<double>(quantiles.size()) / bins;
  double stat = 0.0;
  for (const double o : observed) stat += (o - expected) * (o - expected) / expected;
  res.statistic = stat;
  res.p_value = chi_square_p_value(stat, res.degrees_of_freedom);
  res.significant = res.p_value < 0.05;

  const double mean =
      std::accumulate(quantiles.begin(), quantiles.end(), 0.0) / quantiles.size();
  double var = 0.0;
  for (const double q : quantiles) var += (q - mean) * (q - mean);
  res.mean_quantile = mean;
  res.std_quantile = std::sqrt(var / quantiles.size());
  return res;
}

// ---------------------------------------------------------------------------
// Corpus report
// ---------------------------------------------------------------------------

struct QuantileMatrix {
  std::vector<std::string> video_ids;        // rows
  std::vector<std::string> feature_names;    // 53 columns
  std::vector<std::vector<double>> rows;     // values in [0,1]
};

struct AnalysisReport {
  QuantileMatrix matrix;
  std::vector<ChiSquareResult> features;  // sorted by p ascending
  std::vector<std::string> warnings;      // skipped videos etc.
};

inline std::vector<std::string> analysis_feature_names() {
  std::vector<std::string> names = aesthetic_feature_names();
  names.emplace_back("stillness");
  return names;
}

// 53 features per frame: the aesthetic vector extended by stillness.
inline std::vector<std::vector<double>> analysis_vectors(const std::vector<Frame>& frames,
                                                         const SpectrumPrior& prior,
                                                         int threads = 0) {
  std::vector<GrayFrame> grays(frames.size());
  parallel_for(frames.size(), threads, [&](std::size_t i) { grays[i] = to_gray(frames[i]); });
  const std::vector<double> still = stillness_series(grays, threads);
  std::vector<std::vector<double>> out(frames.size());
  parallel_for(frames.size(), threads, [&](std::size_t i) {
    AestheticVector av = compute_aesthetic_vector(frames[i], prior);
    av.vector.push_back(still[i]);
    out[i] = std::move(av.vector);
  });
  return out;
}

// Builds the videos-by-53 quantile matrix (designated thumbnail = the
// manifest's gt_frame_index) and runs the uniformity test per column.
// Per-video failures become warnings, not errors.
inline AnalysisReport analyze_corpus(const std::vector<VideoRecord>& records,
                                     const LoaderFn& loader, const MatchConfig& match_cfg,
                                     const SpectrumPrior& prior, int bins = 10,
                                     int threads = 0) {
  if (records.empty()) throw ManifestError("no videos to analyze");
  AnalysisReport report;
  report.matrix.feature_names = analysis_feature_names();
  const std::size_t n_features = report.matrix.feature_names.size();

  for (const auto& record : records) {
    try {
      const std::vector<Frame> frames = loader(record);
      if (frames.empty()) throw ManifestError("no frames");
      const int t = record.gt_frame_index;
      if (t < 0 || t >= static_cast<int>(frames.size()))
        throw ManifestError("designated thumbnail index out of range");

      std::vector<char> excluded(frames.size(), 0);
      excluded[t] = 1;
      if (match_cfg.matcher != MatcherKind::exact_index) {
        const NearDuplicateMatcher matcher(match_cfg, t, &frames, nullptr);
        for (std::size_t i = 0; i < frames.size(); ++i)
          if (!excluded[i] && matcher.matches(static_cast<int>(i))) excluded[i] = 1;
      }

      const auto vectors = analysis_vectors(frames, prior, threads);
      std::vector<double> row(n_features);
      std::vector<double> column(frames.size());
      for (std::size_t f = 0; f < n_features; ++f) {
        for (std::size_t i = 0; i < frames.size(); ++i) column[i] = vectors[i][f];
        row[f] = rank_quantile(column, t, excluded);
      }
      report.matrix.video_ids.push_back(record.id);
      report.matrix.rows.push_back(std::move(row));
    } catch (const Error& e) {
      report.warnings.push_back("skipped video " + record.id + ": " + e.what());
    }
  }
  if (report.matrix.rows.empty())
    throw ManifestError("analysis skipped every video; see warnings");

  std::vector<double> column(report.matrix.rows.size());
  for (std::size_t f = 0; f < n_features; ++f) {
    for (std::size_t v = 0; v < report.matrix.rows.size(); ++v)
      column[v] = report.matrix.rows[v][f];
    ChiSquareResult res = chi_square_uniform(column, bins);
    res.feature = report.matrix.feature_names[f];
    report.features.push_back(std::move(res));
  }
  std::stable_sort(report.features.begin(), report.features.end(),
                   [](const ChiSquareResult& a, const ChiSquareResult& b) {
                     return a.p_value < b.p_value;
                   });
  return report;
}

inline std::string quantile_matrix_to_csv(const QuantileMatrix& m) {
  std::ostringstream out;
  out << "video_id";
  for (const auto& name : m.feature_names) out << "," << name;
  out << "\n";
  for (std::size_t v = 0; v < m.rows.size(); ++v) {
    out << m.video_ids[v];
    for (const double q : m.rows[v]) out << "," << format_double(q);
    out << "\n";
  }
  return out.str();
}

inline std::string significance_to_csv(const std::vector<ChiSquareResult>& features) {
  std::ostringstream out;
  out << "feature,mean_q,std_q,chi2,dof,p,significant\n";
  for (const auto& f : features) {
    out << f.feature << "," << format_double(f.mean_quantile) << ","
        << format_double(f.std_quantile) << "," << format_double(f.statistic) << ","
        << f.degrees_of_freedom << "," << format_double(f.p_value) << ","
        << (f.significant ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace thumbforge
