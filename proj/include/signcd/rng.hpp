#pragma once

#include <cstdint>
#include <limits>

namespace signcd {

// Stream roles used when deriving independent generators for one run.
enum class StreamRole : std::uint64_t {
  label_oracle = 1,
  sign_oracle = 2,
  learner = 3,
  coordinate = 4,
};

// Counter-based generator: the i-th output is a bijective mix of key + i*gamma
// (the SplitMix64 construction). Streams are split by hashing a tag into the
// key, so replication r never depends on how many draws replication r-1 made.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t key = 0) : key_(mix(key ^ kSalt)) {}

  static RngStream derive(std::uint64_t base_seed, std::uint64_t replication, StreamRole role) {
    return RngStream(base_seed).split(replication).split(static_cast<std::uint64_t>(role));
  }

  // Independent child stream; does not advance this stream.
  [[nodiscard]] RngStream split(std::uint64_t tag) const {
    RngStream child;
    child.key_ = mix(key_ ^ mix(tag + kGamma));
    return child;
  }

  result_type operator()() {
    ++counter_;
    return mix(key_ + counter_ * kGamma);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool coin() { return ((*this)() >> 63) != 0; }

  // Uniform index in [0, n) by rejection.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t v = (*this)();
    while (v >= limit) v = (*this)();
    return v % n;
  }

  [[nodiscard]] std::uint64_t key() const { return key_; }
  [[nodiscard]] std::uint64_t draws() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSalt = 0x5851f42d4c957f2dULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace signcd
