#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace posegen {

/// Deterministic random stream derived from (master seed, purpose tag,
/// indices). Distributions are implemented here rather than taken from
/// <random> so that sequences are identical across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream derive(std::uint64_t master_seed, std::string_view tag,
                          std::uint64_t index_a = 0, std::uint64_t index_b = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on the closed range [lo, hi].
  int uniform_int(int lo, int hi);

  /// Standard normal sample (Box-Muller, one value per call).
  double normal();
  double normal(double sigma) { return sigma == 0.0 ? 0.0 : sigma * normal(); }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace posegen
