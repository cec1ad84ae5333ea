/*
 * ThumbForge Video Thumbnail Library - Common utilities
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace thumbforge {

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define THUMBFORGE_ERROR(Name)                                  \
  struct Name : Error {                                         \
    explicit Name(const std::string& msg = #Name) : Error(msg) {} \
  }

THUMBFORGE_ERROR(MalformedHeader);
THUMBFORGE_ERROR(UnsupportedColorspace);
THUMBFORGE_ERROR(TruncatedFrame);
THUMBFORGE_ERROR(MalformedFrameMarker);
THUMBFORGE_ERROR(FrameTooSmall);
THUMBFORGE_ERROR(DimensionMismatch);
THUMBFORGE_ERROR(AllFramesFiltered);
THUMBFORGE_ERROR(KTooLarge);
THUMBFORGE_ERROR(EmptyInput);
THUMBFORGE_ERROR(EmptyCorpus);
THUMBFORGE_ERROR(EmptyStream);
THUMBFORGE_ERROR(EmptyTrainingSet);
THUMBFORGE_ERROR(InvalidTrainingData);
THUMBFORGE_ERROR(BadMagic);
THUMBFORGE_ERROR(VersionMismatch);
THUMBFORGE_ERROR(CorruptNode);
THUMBFORGE_ERROR(ModelMissing);
THUMBFORGE_ERROR(MatcherUnavailable);
THUMBFORGE_ERROR(ManifestError);
THUMBFORGE_ERROR(NoComparisonFrames);

#undef THUMBFORGE_ERROR

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// mt19937_64 plus hand-rolled distributions. The std:: distributions are not
// pinned across standard library implementations; these are, which keeps
// every seeded artifact byte-reproducible.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent stream seed from a master seed and stream indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(a)) ^ splitmix64(b + 0x1234));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 42) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw EmptyInput("uniform_index: n == 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller (no cached spare; deterministic stream).
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // First k entries of a seeded permutation of 0..n-1.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      const std::size_t j = i + uniform_index(n - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Data-parallel helper
//
// Static index partition; each task writes its own output slots, so results
// are identical for any thread count.
// ---------------------------------------------------------------------------

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("THUMBFORGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  threads = resolve_thread_count(threads);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(threads, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Deterministic number formatting (shortest round-trip form)
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace thumbforge
