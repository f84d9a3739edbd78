#pragma once

#include <cstdint>
#include <complex>

namespace pfm {

// PCG64 (XSL-RR 128/64) with an explicit 64-bit stream selector. Every random
// routine in this library draws from an instance of this generator, so a
// (seed, stream) pair reproduces output streams byte-for-byte on any platform.
// Normal deviates come from Box-Muller (cached pair), bounded integers from
// modulo rejection; std:: distributions are avoided on purpose because their
// output sequences are implementation-defined.
class Pcg64 {
 public:
  explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next();

  // Uniform on [0,1) with 53 random bits.
  double uniform();
  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Unbiased integer in {0, ..., n-1}, n >= 1.
  int uniform_int(int n);
  // Standard normal.
  double normal();
  // Standard complex normal: E|z|^2 = 1.
  std::complex<double> cnormal();

 private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// Seed plus stream id; experiments derive one independent stream per
// replicate (stream = base + replicate index) so parallel schedules cannot
// change results.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  Pcg64 engine() const { return Pcg64(seed, stream); }
  RngSeed substream(std::uint64_t offset) const {
    return RngSeed{seed, stream + offset};
  }
};

}  // namespace pfm
