// SPDX-License-Identifier: Apache-2.0
// Counter-based random streams (Philox4x32-10).
//
// Each stream is addressed by (master seed, stream id). Streams with distinct
// ids are statistically independent and can be consumed in any order on any
// worker, which is what makes trial-parallel Monte Carlo reproducible: trial k
// always reads stream k regardless of scheduling.
#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace exitlab {

namespace detail {

struct PhiloxBlock {
  std::uint32_t x[4];
};

//! One 4x32 counter block -> 4 output words, 10 rounds.
inline PhiloxBlock philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                              std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return PhiloxBlock{{c0, c1, c2, c3}};
}

}  // namespace detail

//! Derive a sub-seed from (seed, salt); splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(stream_id)),
        stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

  //! Uniform draw on the half-open interval (0, 1]; 53 significant bits.
  double uniform01() {
    const std::uint64_t bits = next_u64();
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  }

  //! Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(phi);
    have_cached_ = true;
    return r * std::cos(phi);
  }

  void normal_fill(Eigen::VectorXd& z) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      z[i] = normal();
    }
  }

  std::uint64_t next_u64() {
    if (word_pos_ == 0) {
      block_ = detail::philox4x32(static_cast<std::uint32_t>(counter_),
                                  static_cast<std::uint32_t>(counter_ >> 32), stream_lo_,
                                  stream_hi_, key0_, key1_);
      ++counter_;
      word_pos_ = 2;
    }
    --word_pos_;
    const int base = 2 * word_pos_;
    return (static_cast<std::uint64_t>(block_.x[base + 1]) << 32) | block_.x[base];
  }

 private:
  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t counter_ = 0;
  detail::PhiloxBlock block_{};
  int word_pos_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace exitlab
