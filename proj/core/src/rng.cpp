#include "levyspde/rng.hpp"

#include <cmath>
#include <numbers>

namespace levyspde {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::array<double, 2> KeyedRng::uniforms(Stream s, std::uint64_t a, std::uint32_t b,
                                         std::uint32_t c) const {
  const auto r = philox4x32(
      {c, b, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32) ^
                                                 (static_cast<std::uint32_t>(s) << 24)},
      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  return {to_unit(r[0], r[1]), to_unit(r[2], r[3])};
}

std::complex<double> KeyedRng::normals(Stream s, std::uint64_t a, std::uint32_t b,
                                       std::uint32_t c) const {
  const auto u = uniforms(s, a, b, c);
  const double rad = std::sqrt(-2.0 * std::log(u[0]));
  const double ang = 2.0 * std::numbers::pi * u[1];
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

double RngStream::uniform() {
  if (left_ == 0) {
    buf_ = rng_.uniforms(stream_, a_, b_, c_++);
    left_ = 2;
  }
  return buf_[2 - left_--];
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const auto z = rng_.normals(stream_, a_, b_, c_++);
  spare_ = z.imag();
  has_spare_ = true;
  return z.real();
}

double RngStream::exponential(double rate) { return -std::log(uniform()) / rate; }

}  // namespace levyspde
