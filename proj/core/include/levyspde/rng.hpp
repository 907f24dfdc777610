#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace levyspde {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Streams of the library. Each keeps its own counter space.
enum class Stream : std::uint32_t {
  heat = 1,
  wave = 2,
  bootstrap = 3,
  chain = 4,
  levy = 5,
  semilinear = 6,
};

/// Random numbers addressed by (seed, stream, a, b, c); the same address always
/// yields the same values, independent of evaluation order.
class KeyedRng {
 public:
  explicit KeyedRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Two uniforms in (0, 1].
  std::array<double, 2> uniforms(Stream s, std::uint64_t a, std::uint32_t b, std::uint32_t c) const;

  /// Two independent standard normals, returned as re and im.
  std::complex<double> normals(Stream s, std::uint64_t a, std::uint32_t b, std::uint32_t c) const;

 private:
  std::uint64_t seed_;
};

/// Sequential draws from one keyed address, advancing the last counter word.
class RngStream {
 public:
  RngStream(const KeyedRng& rng, Stream s, std::uint64_t a, std::uint32_t b)
      : rng_(rng), stream_(s), a_(a), b_(b) {}

  double uniform();
  double normal();
  double exponential(double rate);

 private:
  KeyedRng rng_;
  Stream stream_;
  std::uint64_t a_;
  std::uint32_t b_;
  std::uint32_t c_ = 0;
  std::array<double, 2> buf_{};
  int left_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levyspde
