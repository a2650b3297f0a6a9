#pragma once

#include <cmath>
#include <cstdint>

namespace hysim {

// Self-contained SplitMix64 stream.  We avoid <random> distributions so that
// sampled values are bit-identical across standard library versions; the
// reproducibility contract is: same seed, same stream tag, same index, same
// bits, on any platform with IEEE doubles.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform01_open_low() { return 1.0 - uniform01(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = uniform01_open_low();
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent substream for (seed, tag, index).  Used to give
// every particle its own decorrelated generators, so sampling order and
// thread layout never matter and individual streams (e.g. the global-phase
// stream) can be re-randomized without touching the others.
inline Prng substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  Prng mix(seed);
  std::uint64_t s = mix.next_u64();
  s ^= 0x9e3779b97f4a7c15ull * (tag + 1);
  Prng mix2(s);
  s = mix2.next_u64() ^ (0xbf58476d1ce4e5b9ull * (index + 1));
  Prng mix3(s);
  return Prng(mix3.next_u64());
}

}  // namespace hysim
