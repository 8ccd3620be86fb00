#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mtsf/rng.hpp"

using namespace mtsf;

TEST_SUITE("rng") {

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("equal seeds give equal streams, children differ") {
  const RngSeed seed(42, {1, 2});
  Philox a(seed), b(seed);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t j = 0; j < 200; ++j) firsts.insert(Philox(seed.child(j))());
  CHECK(firsts.size() == 200);
  CHECK(Philox(RngSeed(1))() != Philox(RngSeed(2))());
  CHECK(seed.child({3, 4}) == seed.child(3).child(4));
  // A path is not a prefix-free concatenation of numbers.
  CHECK(Philox(RngSeed(7, {1}))() != Philox(RngSeed(7, {1, 0}))());
}

TEST_CASE("uniform ranges and moments") {
  Philox rng(RngSeed(5));
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_open();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sum2 / n - mean * mean == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("works with standard distributions") {
  Philox rng(RngSeed(9));
  std::normal_distribution<double> normal;
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) sum += normal(rng);
  CHECK(std::abs(sum / 100000) < 0.02);
}

}
