#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace pvfc {

/// splitmix64 step; used to derive independent stream seeds from one
/// scene seed. Algorithm: Steele/Lea/Vigna, as published for seeding.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic gaussian stream: mt19937_64 (fully specified by the
/// standard) + Box-Muller. std::normal_distribution is avoided because its
/// algorithm is implementation-defined.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::string_view tag) {
    std::uint64_t s = seed ^ fnv1a(tag);
    engine_.seed(splitmix64(s));
  }

  double uniform01() {
    // 53-bit mantissa in [0,1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pvfc
