#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace hypernull {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-seed for stream `stream` of a run seeded with `seed`. Every parallel
// chain, null sample and tie-break stream derives its seed this way, so a
// single user seed fixes all randomness regardless of thread count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Well-known stream ids, so that independent consumers of one seed never
// share a stream.
namespace stream {
inline constexpr std::uint64_t chain = 0x100000;
inline constexpr std::uint64_t statistic = 0x200000;
inline constexpr std::uint64_t tie_break = 0x300000;
inline constexpr std::uint64_t synth = 0x400000;
inline constexpr std::uint64_t pair_sample = 0x500000;
}  // namespace stream

// mt19937_64 engine with integer and real draws implemented here rather than
// via <random> distributions, whose output is implementation-defined. The
// sample stream is therefore identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 product = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Two distinct indices in [0, m), uniform over the m(m-1) ordered pairs.
  std::pair<std::size_t, std::size_t> distinct_pair(std::size_t m) {
    auto i = static_cast<std::size_t>(below(m));
    auto j = static_cast<std::size_t>(below(m - 1));
    if (j >= i) ++j;
    return {i, j};
  }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Moves a uniform random `count`-subset of `items` to the front.
  template <class T>
  void partial_shuffle(std::span<T> items, std::size_t count) {
    for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
      auto j = i + static_cast<std::size_t>(below(items.size() - i));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hypernull
