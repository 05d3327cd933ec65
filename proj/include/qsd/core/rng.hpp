#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qsd {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by a 64-bit key and a 64-bit stream index; the
/// remaining 64 bits of the counter enumerate draws inside the stream. Two
/// streams with different (key, index) pairs never share a counter, so
/// trajectories can be assigned streams by index and simulated in any order
/// on any number of workers with identical results.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept;

  /// The raw block function; exposed for known-answer tests.
  static Counter block(Counter counter, Key key) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Exponential variate with the given rate (> 0).
  double exponential(double rate) noexcept;
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  Key key_;
  std::uint64_t stream_;
  std::uint64_t draw_ = 0;
  Counter buffer_{};
  int cursor_ = 4;
};

/// Mixes a master seed and a purpose tag into a Philox key, so that unrelated
/// consumers (initial sampling, bootstrap, resampling) never overlap.
std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t purpose) noexcept;

/// Stream for item `index` of the consumer identified by `purpose`.
inline Philox4x32 make_stream(std::uint64_t master_seed, std::uint64_t purpose,
                              std::uint64_t index) noexcept {
  return Philox4x32(derive_key(master_seed, purpose), index);
}

/// Well-known purpose tags.
namespace stream_purpose {
inline constexpr std::uint64_t trajectory = 0x7261'6a65'6374'0001ULL;
inline constexpr std::uint64_t resample = 0x7265'7361'6d70'0002ULL;
inline constexpr std::uint64_t bootstrap = 0x626f'6f74'7374'0003ULL;
inline constexpr std::uint64_t sampling = 0x7361'6d70'6c65'0004ULL;
inline constexpr std::uint64_t walk = 0x7761'6c6b'0000'0005ULL;
}  // namespace stream_purpose

}  // namespace qsd
