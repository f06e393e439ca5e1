#pragma once

// Deterministic random number utilities.
//
// Everything stochastic in this library flows through the helpers below so
// that a run is reproducible bit-for-bit across platforms and thread counts.
// The standard <random> distributions are implementation-defined, so we roll
// our own uniform/Gaussian transforms on top of std::mt19937_64 (whose output
// sequence *is* pinned by the standard).
//
// Seed derivation scheme (documented contract, referenced by the file
// formats): child seeds are splitmix64(seed + GOLDEN * (k + 1)) where k is a
// stream/request/member counter.  Population members get
// mix(request_seed, member_index), which makes threaded population generation
// independent of scheduling.

#include <cmath>
#include <cstdint>
#include <random>

namespace sss::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Vigna); good avalanche, cheap.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive a child seed from (seed, counter).
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t n) {
  return splitmix64(seed + kGolden * (n + 1));
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix(mix(seed, a), b);
}

// Uniform double in [0, 1): top 53 bits of the engine output.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n); n >= 1.  Lemire-style multiply-shift; the
// 2^-64-level bias is irrelevant at our sample counts and the mapping is
// exactly reproducible everywhere, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(eng()) * n) >> 64);
}

// Standard normal via Box-Muller.  Caches the second variate.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : eng_(seed) {}
  explicit Gaussian(std::mt19937_64 eng) : eng_(eng) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite; u2 in [0,1).
    double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sss::rng
