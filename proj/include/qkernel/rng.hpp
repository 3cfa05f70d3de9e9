#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace qkernel {

// Stream roles keep the counter spaces of unrelated consumers apart.
enum class StreamRole : std::uint64_t {
  GramShots = 1,
  CrossShots = 2,
  Hoeffding = 3,
  Synthetic = 4,
  Split = 5,
  Unitary = 6,
  Validation = 7,
  Generic = 8,
};

inline constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the i-th output is a pure function of (key, i),
// so draws for entry (i, j) do not depend on which thread produced them or
// in which order entries were visited.
class KeyedStream {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit KeyedStream(std::uint64_t key) noexcept : key_(key) {}

  KeyedStream(std::uint64_t seed, StreamRole role,
              std::initializer_list<std::uint64_t> coords) noexcept
      : key_(derive(seed, role, coords)) {}

  static std::uint64_t derive(std::uint64_t seed, StreamRole role,
                              std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t h = splitmix_finalize(seed + kGolden);
    h = splitmix_finalize(h ^ (static_cast<std::uint64_t>(role) * kGolden));
    for (std::uint64_t c : coords) {
      h = splitmix_finalize(h + kGolden + splitmix_finalize(c + 0x632be59bd9b4e019ULL));
    }
    return h;
  }

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return splitmix_finalize(key_ + counter_ * kGolden);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one draw per call keeps the stream position simple.
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return r % bound;
  }

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qkernel
