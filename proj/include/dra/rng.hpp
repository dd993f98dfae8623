#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace dra {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// PCG64 (XSL-RR 128/64) keyed by a (seed, stream) pair.
///
/// Identical pairs reproduce the same draws bit for bit; distinct stream
/// ids select distinct sequences, so one chain per stream can run in
/// parallel without coordination. All samplers in this project pull from
/// this generator only.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    std::uint64_t s = seed;
    const u128 init_state = (static_cast<u128>(detail::splitmix64(s)) << 64) | detail::splitmix64(s);
    std::uint64_t t = stream;
    const u128 init_seq = (static_cast<u128>(detail::splitmix64(t)) << 64) | detail::splitmix64(t);
    inc_ = (init_seq << 1) | 1;
    state_ = 0;
    advance();
    state_ += init_state;
    advance();
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() {
    advance();
    const auto xored = static_cast<std::uint64_t>((state_ >> 64) ^ state_);
    const auto rot = static_cast<int>(state_ >> 122);
    return std::rotr(xored, rot);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); safe to pass through log().
  double next_double_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  /// Fair coin, P(1) = 1/2.
  int coin() { return static_cast<int>(next_u64() >> 63); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller (one value per call, no cached spare).
  double normal() {
    const double u = next_double_open();
    const double v = next_double_open();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  using u128 = unsigned __int128;

  static constexpr u128 multiplier() {
    return (static_cast<u128>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;
  }

  void advance() { state_ = state_ * multiplier() + inc_; }

  u128 state_ = 0;
  u128 inc_ = 1;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
};

}  // namespace dra
