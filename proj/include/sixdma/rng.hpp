#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace sixdma {

// Counter-based deterministic RNG built on SplitMix64. Streams are derived
// statelessly from a tuple of keys, so any (seed, sample, pair, ...) stream
// can be opened independently of generation order. All draws are portable:
// no libstdc++ distribution objects are involved.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Derives a stream key from a list of integer components.
  template <typename... Keys>
  static std::uint64_t derive(std::uint64_t seed, Keys... keys) {
    std::uint64_t h = mix64(seed);
    ((h = mix64(h ^ static_cast<std::uint64_t>(keys))), ...);
    return h;
  }

  template <typename... Keys>
  static StreamRng stream(std::uint64_t seed, Keys... keys) {
    return StreamRng(derive(seed, keys...));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Box-Muller pair of independent N(0,1) draws.
  std::pair<double, double> normal_pair() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

  // Circularly symmetric CN(0,1).
  std::complex<double> cnormal() {
    auto [a, b] = normal_pair();
    return std::complex<double>(a, b) / std::sqrt(2.0);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

// Stream tags keep independently derived streams from colliding.
namespace stream_tag {
inline constexpr std::uint64_t kUserPosition = 0x5553455250'01;
inline constexpr std::uint64_t kFading = 0x46414445'02;
inline constexpr std::uint64_t kMatching = 0x4d415443'03;
inline constexpr std::uint64_t kPso = 0x50534f'04;
inline constexpr std::uint64_t kRotation = 0x524f54'05;
inline constexpr std::uint64_t kEvaluation = 0x4556414c'06;
inline constexpr std::uint64_t kCentralized = 0x43454e54'07;
}  // namespace stream_tag

}  // namespace sixdma
