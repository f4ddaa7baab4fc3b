#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace translasso {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent stream seed from a base seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL));
}

// xoshiro256++ with explicitly coded distributions, so that seeded runs are
// byte-reproducible regardless of standard-library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) {
      x = splitmix64(x);
      w = x;
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method (one spare cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  // Laplace(0, b) by inverse CDF.
  double laplace(double b) {
    const double u = uniform() - 0.5;
    const double sign = (u < 0.0) ? -1.0 : 1.0;
    return -b * sign * std::log1p(-2.0 * std::fabs(u));
  }

  // Unbiased integer in [0, n) (Lemire with rejection).
  std::uint64_t below(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<__uint128_t>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Seeded Fisher–Yates permutation of 0..n-1.
  std::vector<int> permutation(int n) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
      const int tmp = idx[i];
      idx[i] = idx[j];
      idx[j] = tmp;
    }
    return idx;
  }

  // m distinct indices from 0..p-1 (partial Fisher–Yates), in draw order.
  std::vector<int> sample_without_replacement(int p, int m) {
    std::vector<int> idx(p);
    for (int i = 0; i < p; ++i) idx[i] = i;
    std::vector<int> out;
    out.reserve(m);
    for (int i = 0; i < m && i < p; ++i) {
      const int j = i + static_cast<int>(below(static_cast<std::uint64_t>(p - i)));
      const int tmp = idx[i];
      idx[i] = idx[j];
      idx[j] = tmp;
      out.push_back(idx[i]);
    }
    return out;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace translasso
