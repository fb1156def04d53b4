#pragma once

#include <array>
#include <cstdint>

namespace qfluct {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Deterministic random stream keyed by (seed, stream id).
///
/// The seed is the Philox key; the stream id occupies the upper half of the
/// counter and the block index the lower half, so streams with different ids
/// never share a counter value. Output depends only on integer arithmetic and
/// the libm log/sqrt/cos/sin used by Box-Muller, with no rejection loops.
class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Derived stream for sub-task `index` (e.g. a grid point or a walker).
  static RngStream derive(std::uint64_t seed, std::uint64_t index) { return {seed, index}; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xFFFFFFFFu; }
  result_type operator()();

  /// Uniform in (0, 1], 53 random bits.
  double uniform_open0();
  /// Standard normal via Box-Muller; both variates of each pair are used.
  double gaussian();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qfluct
