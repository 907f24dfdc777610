#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "levyspde/error.hpp"
#include "levyspde/rng.hpp"

using namespace levyspde;

TEST(Philox, KnownAnswerZero) {
  const auto r = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r[0], 0x6627e8d5u);
  EXPECT_EQ(r[1], 0xe169c58du);
  EXPECT_EQ(r[2], 0xbc57ac4cu);
  EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerPi) {
  const auto r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(r[0], 0xd16cfe09u);
  EXPECT_EQ(r[1], 0x94fdcceb);
  EXPECT_EQ(r[2], 0x5001e420u);
  EXPECT_EQ(r[3], 0x24126ea1u);
}

TEST(KeyedRng, SameAddressSameValues) {
  KeyedRng a(42), b(42);
  EXPECT_EQ(a.uniforms(Stream::heat, 7, 3, 1), b.uniforms(Stream::heat, 7, 3, 1));
  EXPECT_NE(a.uniforms(Stream::heat, 7, 3, 1), a.uniforms(Stream::wave, 7, 3, 1));
  EXPECT_NE(a.uniforms(Stream::heat, 7, 3, 1), KeyedRng(43).uniforms(Stream::heat, 7, 3, 1));
}

TEST(KeyedRng, UniformsInHalfOpenUnit) {
  KeyedRng rng(1);
  for (std::uint32_t c = 0; c < 10000; ++c) {
    const auto u = rng.uniforms(Stream::chain, 0, 0, c);
    for (double v : u) {
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(RngStream, NormalMoments) {
  KeyedRng rng(9);
  RngStream s(rng, Stream::bootstrap, 0, 0);
  const int n = 200000;
  double m1 = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  EXPECT_LT(std::abs(m1), 4.0 / std::sqrt(n));
  EXPECT_LT(std::abs(m2 - 1.0), 4.0 * std::sqrt(2.0 / n));
  EXPECT_LT(std::abs(m4 - 3.0), 4.0 * std::sqrt(96.0 / n));
}

TEST(RngStream, ExponentialMean) {
  KeyedRng rng(5);
  RngStream s(rng, Stream::levy, 1, 2);
  const int n = 100000;
  double m = 0;
  for (int i = 0; i < n; ++i) m += s.exponential(2.0);
  m /= n;
  EXPECT_NEAR(m, 0.5, 4.0 * 0.5 / std::sqrt(n));
}

TEST(Error, LabelPrefixesMessage) {
  const Error e(ErrorCode::symmetry_required, "wave needs symmetry");
  EXPECT_EQ(e.code(), ErrorCode::symmetry_required);
  EXPECT_EQ(std::string(e.what()), "symmetry-required: wave needs symmetry");
  std::set<std::string> labels;
  for (int c = 0; c <= static_cast<int>(ErrorCode::io); ++c)
    labels.insert(std::string(to_string(static_cast<ErrorCode>(c))));
  EXPECT_EQ(labels.size(), static_cast<std::size_t>(ErrorCode::io) + 1);
}
