#pragma once

#include <cmath>
#include <cstdint>

namespace confdist {

// Counter-based deterministic RNG. Replicate i of a run seeds its own
// splitmix64 stream from mix(seed, i), so parallel and serial execution of a
// simulation produce bit-identical draws regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  static Rng for_replicate(std::uint64_t seed, std::uint64_t replicate) {
    std::uint64_t h = seed ^ (0x9E3779B97F4A7C15ull * (replicate + 1));
    h = mix(h);
    h = mix(h ^ 0xD1B54A32D192ED03ull);
    return Rng(h);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // uniform on the open interval (0,1)
  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double t = 2.0 * M_PI * uniform01();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  double chisq(int df) {
    double s = 0.0;
    for (int i = 0; i < df; ++i) {
      const double z = normal();
      s += z * z;
    }
    return s;
  }

  double noncentral_chisq(int df, double ncp) {
    const double z = normal() + std::sqrt(ncp);
    return z * z + (df > 1 ? chisq(df - 1) : 0.0);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace confdist
