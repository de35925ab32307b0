#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace wtc {

/// SplitMix64 finalizer; used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// xoshiro256** generator with explicit, value-semantic state.
///
/// Independent streams are derived from a master seed and a path of integers
/// (for example `{n, replicate}`), so a replicate's draws never depend on the
/// order in which replicates are executed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  /// Substream keyed by `(master, path...)`.
  static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;
  /// Unbiased integer in [0, n).
  std::uint64_t index(std::uint64_t n) noexcept;
  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;
  /// Gamma variate with the given shape and rate (Marsaglia-Tsang).
  double gamma(double shape, double rate) noexcept;

 private:
  std::uint64_t s_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wtc
