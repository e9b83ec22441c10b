#pragma once

#include <cstdint>

namespace nocsim {

// Deterministic generator with explicitly coded draw algorithms, so results
// are identical across standard libraries and platforms. splitmix64 core.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); modulo with rejection to avoid bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real01() < p; }

 private:
  std::uint64_t state_;
};

// Stream derivation: mixes a base seed with per-stream tags so PE streams,
// sweep jobs and reservoirs are independent but reproducible.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag_a,
                                 std::uint64_t tag_b = 0) {
  Rng mixer(base ^ (tag_a * 0x9e3779b97f4a7c15ULL) ^
            (tag_b * 0xd1b54a32d192ed03ULL));
  mixer.next_u64();
  return mixer.next_u64();
}

}  // namespace nocsim
