#pragma once

#include <cstdint>
#include <random>

namespace rwpoly {

/// (seed, stream) pair naming an independent, reproducible random sequence.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Deterministic sub-stream; distinct `k` give distinct streams.
  RngStream child(std::uint64_t k) const noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Generator bound to one RngStream.
class Rng {
 public:
  explicit Rng(RngStream s);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  bool coin() { return (engine_() >> 63) != 0; }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rwpoly
