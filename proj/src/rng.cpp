#include "pfm/rng.hpp"

#include <cmath>

namespace pfm {

namespace {
constexpr unsigned __int128 kMult =
    ((static_cast<unsigned __int128>(0x2360ed051fc65da4ULL) << 64) |
     0x4385df649fccf645ULL);
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

Pcg64::Pcg64(std::uint64_t seed, std::uint64_t stream) {
  inc_ = (static_cast<unsigned __int128>(stream) << 1) | 1u;
  state_ = 0;
  next();
  state_ += seed;
  next();
}

std::uint64_t Pcg64::next() {
  state_ = state_ * kMult + inc_;
  const std::uint64_t xored =
      static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
  const unsigned rot = static_cast<unsigned>(state_ >> 122);
  return (xored >> rot) | (xored << ((64u - rot) & 63u));
}

double Pcg64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Pcg64::uniform_pos() {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double Pcg64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int Pcg64::uniform_int(int n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return static_cast<int>(r % bound);
  }
}

double Pcg64::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double t = kTwoPi * uniform();
  cached_normal_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

std::complex<double> Pcg64::cnormal() {
  // Independent N(0, 1/2) real and imaginary parts.
  const double s = 0.70710678118654752440;
  return {s * normal(), s * normal()};
}

}  // namespace pfm
