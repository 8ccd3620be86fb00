#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mtsf/estimator.hpp"
#include "mtsf/hermite.hpp"
#include "mtsf/simulate.hpp"

using namespace mtsf;
using doctest::Approx;

TEST_SUITE("estimator") {

TEST_CASE("linear statistic of a single point") {
  const auto basis = TaperBasis::hermite(2, 4, 5.0);
  PointPattern p(Window({5.0, 5.0}));
  const double x[] = {1.2, -0.7};
  p.push_back(x);
  const double k[] = {0.9, 2.1};
  const auto all = linear_statistics(p, basis, k);
  REQUIRE(all.size() == 16);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto& i = basis.indices()[j];
    const std::complex<double> expected = std::polar(taper_value(basis, i, x), -(k[0] * x[0] + k[1] * x[1]));
    CHECK(std::abs(all[j] - expected) < 1e-14);
    CHECK(std::abs(linear_statistic(p, basis, i, k) - expected) < 1e-14);
  }
  CHECK_THROWS(linear_statistic(p, basis, HermiteIndex{4, 0}, k));
}

TEST_CASE("linear statistics are additive over points") {
  const Window w({6.0, 6.0});
  const auto a = sample_poisson(1.0, w, RngSeed(1));
  const auto b = sample_poisson(1.0, w, RngSeed(2));
  PointPattern both(w);
  for (std::size_t j = 0; j < a.size(); ++j) both.push_back(a.point(j));
  for (std::size_t j = 0; j < b.size(); ++j) both.push_back(b.point(j));
  const auto basis = TaperBasis::hermite(2, 5, 6.0);
  const double k[] = {0.3, -1.1};
  const auto ta = linear_statistics(a, basis, k), tb = linear_statistics(b, basis, k), tab = linear_statistics(both, basis, k);
  for (std::size_t j = 0; j < tab.size(); ++j) CHECK(std::abs(tab[j] - ta[j] - tb[j]) < 1e-12);
}

TEST_CASE("multitaper value and estimates") {
  const std::vector<std::complex<double>> T = {{1.0, 1.0}, {2.0, 0.0}};
  const std::vector<std::complex<double>> F = {{0.5, 0.0}, {0.0, 1.0}};
  // (|1 + i - 1|^2 + |2 - 2i|^2) / (2 * 2)
  CHECK(multitaper_value(T, F, 2.0) == Approx((1.0 + 8.0) / 4.0));
  CHECK(multitaper_value(T, F, 0.0) == 0.0);
  CHECK_THROWS(multitaper_value(T, std::vector<std::complex<double>>{{1.0, 0.0}}, 1.0));

  const auto basis = TaperBasis::hermite(2, 3, 8.0);
  const auto p = sample_poisson(1.5, Window({8.0, 8.0}), RngSeed(3));
  const double k[] = {1.0, 1.0};
  const auto oracle = multitaper_oracle(p, basis, k, 1.5, true);
  REQUIRE(oracle.per_taper.size() == 9);
  double sum = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto c = centered_statistic(p, basis, basis.indices()[j], k, 1.5);
    CHECK(std::abs(c - oracle.per_taper[j]) < 1e-12);
    sum += std::norm(c);
  }
  CHECK(oracle.value == Approx(sum / (1.5 * 9.0)).epsilon(1e-12));
  CHECK(oracle.taper_count == 9);
  CHECK(oracle.intensity_mode == IntensityMode::oracle);

  const auto plugin = multitaper_plugin(p, basis, k);
  CHECK(plugin.intensity == Approx(static_cast<double>(p.size()) / 256.0));
  CHECK(plugin.per_taper.empty());
  CHECK(multitaper_plugin(PointPattern(Window({8.0, 8.0})), basis, k).value == 0.0);
  CHECK_THROWS(multitaper_oracle(p, basis, k, 0.0));
  const double k1[] = {1.0};
  CHECK_THROWS(multitaper_plugin(p, basis, k1));
}

TEST_CASE("oracle estimate is unbiased for poisson") {
  // E |T_i - lambda F_i|^2 = lambda ||f_i 1_W||^2, which is 1 up to a
  // negligible tail for these tapers.
  const Window w({10.0, 10.0});
  const auto basis = TaperBasis::hermite(2, 8, 10.0);
  const double k[] = {1.5, -0.5};
  double sum = 0.0;
  const int n = 200;
  for (int r = 0; r < n; ++r) {
    sum += multitaper_oracle(sample_poisson(1.0, w, RngSeed(40, {static_cast<std::uint64_t>(r)})), basis, k, 1.0).value;
  }
  // Each estimate averages 64 near-independent chi-square(2)/2 terms.
  CHECK(sum / n == Approx(1.0).epsilon(0.04));
}

TEST_CASE("risk bound terms for a single taper") {
  const TaperBasis basis(1, 1, 2.0, 10.0);
  const auto t = risk_bound_terms(basis, Window({10.0}), 2.0, 3.0, 4.0, 9.0);
  CHECK(t.variance_term == Approx(std::numbers::sqrt2 * 4.0));
  CHECK(t.f_loc == Approx(3.0 / 4.0 * 0.5));
  CHECK(t.b4 == Approx(0.6316187777460647 / std::sqrt(2.0) * 3.0).epsilon(1e-10));
  // Tail of psi_0 outside [-5, 5]: erfc(5).
  CHECK(t.w_loc == Approx(std::sqrt(std::erfc(5.0))).epsilon(1e-3));
  CHECK_THROWS(risk_bound_terms(basis, Window({10.0}), 2.5, 3.0, 4.0, 9.0));
  CHECK_THROWS(risk_bound_terms(basis, Window({10.0, 10.0}), 2.0, 3.0, 4.0, 9.0));
}

}
