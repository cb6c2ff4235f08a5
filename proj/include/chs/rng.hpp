#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace chs {

/// Counter-based generator keyed by (seed, stream). The n-th output is a pure
/// function of (seed, stream, n), so independent streams can be handed to
/// workers in any order and still reproduce the same draws.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// A generator for a sub-stream; used to fan out deterministic child streams.
  CounterRng split(std::uint64_t child) const { return CounterRng(key_, child); }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard complex normal: real and imaginary parts i.i.d. N(0, 1/2).
inline std::complex<double> complex_normal(CounterRng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline double uniform01(CounterRng& rng) {
  // 53 random mantissa bits
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(CounterRng& rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

/// Splits [0, total) into fixed-size chunks, evaluates fn(chunk_index, begin, end)
/// for each, and returns the per-chunk results in chunk order. The chunking does
/// not depend on `jobs`, so reductions over the returned vector are bit-stable
/// across worker counts.
template <class Fn>
auto run_chunks(std::size_t total, std::size_t chunk, unsigned jobs, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}, std::size_t{}))> {
  using R = decltype(fn(std::size_t{}, std::size_t{}, std::size_t{}));
  const std::size_t n_chunks = chunk == 0 ? 0 : (total + chunk - 1) / chunk;
  std::vector<R> out(n_chunks);
  auto work = [&](std::size_t c) {
    const std::size_t b = c * chunk;
    out[c] = fn(c, b, std::min(total, b + chunk));
  };
  if (jobs <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) work(c);
    return out;
  }
  std::vector<std::future<void>> workers;
  const unsigned w = std::min<unsigned>(jobs, static_cast<unsigned>(n_chunks));
  for (unsigned j = 0; j < w; ++j) {
    workers.push_back(std::async(std::launch::async, [&, j] {
      for (std::size_t c = j; c < n_chunks; c += w) work(c);
    }));
  }
  for (auto& f : workers) f.get();
  return out;
}

}  // namespace chs
