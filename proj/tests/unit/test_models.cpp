#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mtsf/models.hpp"

using namespace mtsf;
using doctest::Approx;

namespace {

double S(const ModelSpec& m, double k) {
  const double t = 2.0 * std::numbers::pi / 3.0;
  const double kk[] = {k * std::cos(t), k * std::sin(t)};
  return structure_factor(m, kk);
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("closed-form structure factors") {
  for (double k : {0.0, 0.5, 1.0, 2.0, 3.7}) {
    CHECK(S(model::Thomas{}, k) == Approx(1.0 + 5.0 * std::exp(-k * k / 4.0)).epsilon(1e-14));
    CHECK(S(model::Ginibre{}, k) == Approx(1.0 - std::exp(-k * k / 4.0)).epsilon(1e-14).scale(1.0));
    CHECK(S(model::Poisson{2.0}, k) == 1.0);
  }
  CHECK(S(model::Ginibre{}, 0.0) == 0.0);
  CHECK(S(model::Thomas{}, 0.0) == 6.0);
  CHECK(S(model::Matern{}, 0.0) == 6.0);
  const double z = 1.5 * 2.0;
  const double f = 2.0 * std::cyl_bessel_j(1.0, z) / z;
  CHECK(S(model::Matern{}, 2.0) == Approx(1.0 + 5.0 * f * f).epsilon(1e-14));
  const double k3[] = {0.1, 0.2, 0.3};
  CHECK(structure_factor(model::Poisson{}, k3) == 1.0);
}

TEST_CASE("bessel process") {
  const model::BesselDpp m{};
  CHECK(S(m, 0.0) == Approx(1.0 - 0.3 * std::numbers::pi).epsilon(1e-14));
  CHECK(S(m, 4.0) == 1.0);
  CHECK(S(m, 10.0) == 1.0);
  double previous = S(m, 0.0);
  for (int j = 1; j <= 40; ++j) {
    const double v = S(m, 0.1 * j);
    CHECK(v >= previous);
    previous = v;
  }
  CHECK_THROWS_AS(validate(model::BesselDpp{0.4, 1.0}), std::invalid_argument);
}

TEST_CASE("perturbed lattice formula") {
  const double k[] = {1.0, 2.0};
  const double s1 = std::sin(0.5) / 0.5, s2 = std::sin(1.0) / 1.0;
  const double expected = 1.0 - s1 * s1 * s2 * s2 * std::exp(-std::sqrt(std::sqrt(5.0) / 2.0));
  CHECK(structure_factor(model::PerturbedLattice{}, k) == Approx(expected).epsilon(1e-14));
  const double zero[] = {0.0, 0.0};
  CHECK(structure_factor(model::PerturbedLattice{}, zero) == 0.0);
  CHECK_THROWS(structure_factor_radial(model::PerturbedLattice{}, 1.0));
}

TEST_CASE("numerically integrated structure factors") {
  // tests/oracles/structure_factors.py
  CHECK(S(model::ExpLgcp{}, 0.0) == Approx(5.30608029395149).epsilon(1e-9));
  CHECK(S(model::ExpLgcp{}, 1.0) == Approx(2.62382293398129).epsilon(1e-9));
  CHECK(S(model::ExpLgcp{}, 3.0) == Approx(1.1779250828585).epsilon(1e-9));
  CHECK(S(model::ArcsinCox{}, 0.0) == Approx(1.02254168666).epsilon(1e-6));
  CHECK(bump_autocorrelation(0.1) == Approx(0.768913886844).epsilon(1e-5));
  CHECK(bump_autocorrelation(0.3) == Approx(0.081628868905).epsilon(1e-4));
  CHECK(bump_autocorrelation(0.0) == 1.0);
  CHECK(bump_autocorrelation(0.5) == 0.0);
  CHECK(bump_autocorrelation(3.0) == 0.0);
  CHECK(S(model::ExpLgcp{0.0, 0.0, 1.0}, 1.0) == 1.0);
}

TEST_CASE("intensities") {
  CHECK(intensity(model::Thomas{}) == Approx(1.0));
  CHECK(intensity(model::Matern{}) == Approx(1.0));
  CHECK(intensity(model::ExpLgcp{}) == Approx(std::exp(0.25)));
  CHECK(intensity(model::Ginibre{}) == Approx(1.0 / std::numbers::pi));
  CHECK(intensity(model::BesselDpp{}) == 0.3);
  CHECK(intensity(model::PerturbedLattice{}) == 1.0);
  CHECK(intensity(model::ArcsinCox{}) == 1.0);
}

TEST_CASE("names and validation") {
  CHECK(model_name(model::ExpLgcp{}) == "lgcp");
  CHECK(model_name(model::ArcsinCox{}) == "arcsin_cox");
  CHECK_THROWS_WITH(validate(model::Thomas{-1.0, 0.25, 0.2}), "model.alpha must be positive");
  CHECK_THROWS(validate(model::Poisson{-1.0}));
  CHECK_NOTHROW(validate(model::Thomas{5.0, 0.25, 0.0}));
  const double k1[] = {1.0};
  CHECK_THROWS(structure_factor(model::Thomas{}, k1));
}

TEST_CASE("arcsin pair correlation") {
  const covariance::Exponential flat{0.25, 1e300};
  CHECK(pair_correlation_arcsin(flat, 1.0) == Approx(1.0 + (1.0 - std::exp(-0.5)) / 2.0).epsilon(1e-12));
  const covariance::ScaledBump bump{0.5, 1.0};
  CHECK(pair_correlation_arcsin(bump, 0.6) == 1.0);
  CHECK(pair_correlation_arcsin(bump, 0.1) > 1.0);
}

TEST_CASE("thinning map") {
  for (double p : {0.0, 0.3, 0.5, 1.0}) CHECK(thinned_structure_factor(1.0, p) == 1.0);
  CHECK(thinned_structure_factor(3.0, 0.5) == 2.0);
  CHECK(thinned_structure_factor(0.0, 0.25) == 0.75);
  CHECK_THROWS(thinned_structure_factor(1.0, 1.5));
}

TEST_CASE("chi-square bound") {
  // d = 1, 8 sigma^4 rho^2 = 1/2, |W| = 2 rho: (1/2)^{-1} - 1.
  CHECK(chi_square_bound(0.5, 1.0, 1, 2.0) == Approx(1.0).epsilon(1e-14));
  CHECK(chi_square_bound(0.0, 1.0, 2, 100.0) == 0.0);
  CHECK_THROWS_AS(chi_square_bound(1.0, 1.0, 1, 2.0), std::domain_error);
  CHECK_THROWS_AS(chi_square_bound(std::pow(1.0 / 64.0, 0.25), 1.0, 2, 4.0), std::domain_error);
  CHECK(chi_square_bound(0.1, 0.5, 2, 400.0) > 0.0);
}

}
