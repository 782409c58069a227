#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qmem {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream addressed by (seed, stream id). Two streams
/// with different ids never share a counter block, so per-trial streams can
/// be created in any order on any thread and still produce the same numbers.
///
/// Satisfies UniformRandomBitGenerator. Normal deviates come from a
/// Box-Muller transform written here so that the output does not depend on
/// the standard library's distribution implementation.
class CounterStream {
 public:
  using result_type = std::uint32_t;

  CounterStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes a label into a seed, used to derive independent series keys.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace qmem
