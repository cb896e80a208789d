#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace sentinel {

/// Identifies one reproducible random stream. Distinct stream_index values
/// under the same master_seed map to disjoint Philox counter ranges.
struct SeededStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

/// SplitMix64 finalizer; used to derive purpose-specific master seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(seed ^ mix64(tag));
}

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Key = master seed, counter = (stream index, block index).
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(SeededStream s) noexcept
      : key_{static_cast<std::uint32_t>(s.master_seed), static_cast<std::uint32_t>(s.master_seed >> 32)},
        stream_(s.stream_index) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ >= 4) refill();
    const std::uint64_t lo = buf_[pos_];
    const std::uint64_t hi = buf_[pos_ + 1];
    pos_ += 2;
    return (hi << 32) | lo;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_pos() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }
  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  static Block round10(Block ctr, Key key) noexcept;

 private:
  void refill() noexcept {
    const Block ctr{static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32),
                    static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)};
    buf_ = round10(ctr, key_);
    ++block_;
    pos_ = 0;
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buf_{};
  unsigned pos_ = 4;
};

inline Philox4x32::Block Philox4x32::round10(Block ctr, Key key) noexcept {
  constexpr std::uint32_t kM0 = 0xD2511F53U, kM1 = 0xCD9E8D57U;
  constexpr std::uint32_t kW0 = 0x9E3779B9U, kW1 = 0xBB67AE85U;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

inline std::uint64_t Philox4x32::below(std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace sentinel
