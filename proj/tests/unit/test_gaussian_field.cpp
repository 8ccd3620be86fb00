#include <doctest.h>

#include <cmath>

#include "mtsf/gaussian_field.hpp"
#include "mtsf/models.hpp"

using namespace mtsf;

namespace {

// Empirical covariance of values at grid offsets (0, 0) and lag along the
// last axis, pooled over many draws.
struct Moments {
  double var = 0.0;
  double lag1 = 0.0;
  double lag3 = 0.0;
  double mean = 0.0;
};

Moments moments(const GaussianFieldSampler& sampler, int draws, std::uint64_t seed) {
  const std::size_t n0 = sampler.shape()[0], n1 = sampler.shape()[1];
  Moments m;
  double count0 = 0, count1 = 0, count3 = 0;
  for (int t = 0; t < draws; ++t) {
    Philox rng(RngSeed(seed, {static_cast<std::uint64_t>(t)}));
    const auto v = sampler.sample(rng);
    for (std::size_t a = 0; a < n0; ++a) {
      for (std::size_t b = 0; b < n1; ++b) {
        const double x = v[a * n1 + b];
        m.mean += x;
        m.var += x * x;
        ++count0;
        if (b + 1 < n1) {
          m.lag1 += x * v[a * n1 + b + 1];
          ++count1;
        }
        if (b + 3 < n1) {
          m.lag3 += x * v[a * n1 + b + 3];
          ++count3;
        }
      }
    }
  }
  m.mean /= count0;
  m.var /= count0;
  m.lag1 /= count1;
  m.lag3 /= count3;
  return m;
}

}  // namespace

TEST_SUITE("gaussian_field") {

TEST_CASE("circulant embedding reproduces the covariance") {
  const covariance::Exponential cov{0.5, 1.0};
  auto c = [cov](double r) { return covariance_value(cov, r); };
  const GaussianFieldSampler sampler(c, {24, 24}, 0.25);
  CHECK(sampler.clipped_fraction() == 0.0);
  CHECK(sampler.torus_shape()[0] >= 48);
  const auto m = moments(sampler, 400, 1);
  // 400 x 576 correlated values; tolerances are several standard errors.
  CHECK(std::abs(m.mean) < 0.03);
  CHECK(m.var == doctest::Approx(0.5).epsilon(0.05));
  CHECK(m.lag1 == doctest::Approx(0.5 * std::exp(-0.25)).epsilon(0.05));
  CHECK(m.lag3 == doctest::Approx(0.5 * std::exp(-0.75)).epsilon(0.07));
}

TEST_CASE("cholesky reference agrees") {
  const covariance::Exponential cov{1.0, 2.0};
  auto c = [cov](double r) { return covariance_value(cov, r); };
  const GaussianFieldSampler sampler(c, {12, 12}, 0.5, FieldMethod::cholesky);
  const auto m = moments(sampler, 1500, 2);
  CHECK(m.var == doctest::Approx(1.0).epsilon(0.05));
  CHECK(m.lag1 == doctest::Approx(std::exp(-0.25)).epsilon(0.05));
  CHECK(m.lag3 == doctest::Approx(std::exp(-0.75)).epsilon(0.07));
}

TEST_CASE("compactly supported covariance") {
  const covariance::ScaledBump cov{1.0, 2.0};
  auto c = [cov](double r) { return covariance_value(cov, r); };
  const GaussianFieldSampler sampler(c, {32, 32}, 0.125);
  CHECK(sampler.clipped_fraction() < 1e-6);
  const auto m = moments(sampler, 200, 3);
  CHECK(m.var == doctest::Approx(1.0).epsilon(0.06));
  CHECK(m.lag1 == doctest::Approx(bump_autocorrelation(0.125 / 2.0)).epsilon(0.06));
}

TEST_CASE("draws are deterministic and shapes validated") {
  auto c = [](double r) { return std::exp(-r); };
  const GaussianFieldSampler sampler(c, {5, 7}, 0.3);
  Philox a(RngSeed(4)), b(RngSeed(4));
  CHECK(sampler.sample(a) == sampler.sample(b));
  CHECK(sampler.size() == 35);
  CHECK_THROWS(GaussianFieldSampler(c, {}, 0.3));
  CHECK_THROWS(GaussianFieldSampler(c, {4, 0}, 0.3));
  CHECK_THROWS(GaussianFieldSampler(c, {4, 4}, -1.0));
}

}
