#pragma once

#include <cmath>
#include <cstdint>

namespace permest {

// SplitMix64 finalizer; also used as the seed-mixing hash.
inline std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed of the dedicated substream for sample `index` under `master_seed`.
// Every sample owns its own counter-based stream, so results do not depend
// on how samples are distributed over workers.
inline std::uint64_t sample_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t h = splitmix_mix(master_seed + 0x9E3779B97F4A7C15ull);
  return splitmix_mix(h ^ (index + 0xA0761D6478BD642Full));
}

// Per-sample random stream: SplitMix64 driving (0,1) uniforms and
// Box-Muller normals. The draw order is part of the reproducibility
// contract: callers consume entries row-major.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : x_(seed) {}
  SampleStream(std::uint64_t master_seed, std::uint64_t index)
      : SampleStream(sample_seed(master_seed, index)) {}

  std::uint64_t next_u64() {
    x_ += 0x9E3779B97F4A7C15ull;
    return splitmix_mix(x_);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform01() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // Standard normal via Box-Muller, second value cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double m = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * 3.14159265358979323846 * u2;
    spare_ = m * std::sin(t);
    have_spare_ = true;
    return m * std::cos(t);
  }

  // Uniform index in {0, ..., m-1}.
  int uniform_index(int m) { return int(uniform01() * double(m)); }

  // -1 or +1 with probability 1/2 each.
  double rademacher() { return (next_u64() >> 63) ? -1.0 : 1.0; }

 private:
  std::uint64_t x_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace permest
