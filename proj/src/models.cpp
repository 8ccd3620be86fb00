#include "mtsf/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mtsf/quadrature.hpp"

namespace mtsf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double norm(std::span<const double> k) {
  double s = 0.0;
  for (double v : k) s += v * v;
  return std::sqrt(s);
}

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// 2 pi int_0^upper h(s) J_0(s t) s ds by Gauss-Legendre panels, with enough
// panels to resolve both the profile scale and the Bessel oscillation.
double hankel0(const std::function<double(double)>& h, double upper, double scale, double t) {
  static const QuadratureRule rule = gauss_legendre(16);
  const auto panels = static_cast<std::size_t>(std::ceil(upper / scale * 2.0 + upper * t / 2.0)) + 4;
  auto integrand = [&](double s) { return h(s) * std::cyl_bessel_j(0.0, s * t) * s; };
  return 2.0 * std::numbers::pi * integrate_panels(integrand, 0.0, upper, panels, rule);
}

// Planar bump phi(u) = exp(-1/(1 - 16 u^2)) on u < 1/4, unnormalised.
double bump(double u) {
  const double v = 1.0 - 16.0 * u * u;
  return v > 0.0 ? std::exp(-1.0 / v) : 0.0;
}

// Table of A(t) = int phi(|y|) phi(|t e_1 - y|) dy on t in [0, 1/2].
struct BumpTable {
  static constexpr std::size_t kSteps = 2000;
  std::vector<double> values;

  BumpTable() : values(kSteps + 1, 0.0) {
    const QuadratureRule radial = gauss_legendre(48);
    constexpr int kAngles = 96;
    for (std::size_t m = 0; m <= kSteps; ++m) {
      const double t = 0.5 * static_cast<double>(m) / kSteps;
      double total = 0.0;
      for (std::size_t q = 0; q < radial.size(); ++q) {
        const double u = 0.125 * (radial.nodes[q] + 1.0);
        const double pu = bump(u);
        if (pu == 0.0) continue;
        // Trapezoid in the angle on [0, pi]: the integrand is smooth, even
        // and periodic.
        double ring = 0.0;
        for (int j = 0; j <= kAngles; ++j) {
          const double a = std::numbers::pi * j / kAngles;
          const double dist = std::sqrt(std::max(0.0, t * t + u * u - 2.0 * t * u * std::cos(a)));
          const double w = (j == 0 || j == kAngles) ? 0.5 : 1.0;
          ring += w * bump(dist);
        }
        ring *= 2.0 * std::numbers::pi / kAngles;
        total += 0.125 * radial.weights[q] * u * pu * ring;
      }
      values[m] = total;
    }
    const double a0 = values[0];
    for (double& v : values) v /= a0;
  }
};

const BumpTable& bump_table() {
  static const BumpTable table;
  return table;
}

}  // namespace

double bump_autocorrelation(double t) {
  t = std::abs(t);
  if (t >= 0.5) return 0.0;
  const auto& v = bump_table().values;
  const double pos = t / 0.5 * BumpTable::kSteps;
  const auto m = std::min(static_cast<std::size_t>(pos), BumpTable::kSteps - 1);
  const double frac = pos - static_cast<double>(m);
  return std::max(0.0, v[m] + frac * (v[m + 1] - v[m]));
}

std::string model_name(const ModelSpec& model) {
  return std::visit(overloaded{
                        [](const model::Poisson&) { return "poisson"; },
                        [](const model::Thomas&) { return "thomas"; },
                        [](const model::Matern&) { return "matern"; },
                        [](const model::ExpLgcp&) { return "lgcp"; },
                        [](const model::Ginibre&) { return "ginibre"; },
                        [](const model::BesselDpp&) { return "bessel"; },
                        [](const model::PerturbedLattice&) { return "lattice"; },
                        [](const model::ArcsinCox&) { return "arcsin_cox"; },
                    },
                    model);
}

void validate(const ModelSpec& model) {
  std::visit(overloaded{
                 [](const model::Poisson& m) {
                   require(m.intensity >= 0.0 && std::isfinite(m.intensity), "model.intensity must be non-negative");
                 },
                 [](const model::Thomas& m) {
                   require(m.alpha > 0.0 && std::isfinite(m.alpha), "model.alpha must be positive");
                   require(m.sigma2 > 0.0 && std::isfinite(m.sigma2), "model.sigma2 must be positive");
                   require(m.mu >= 0.0 && std::isfinite(m.mu), "model.mu must be non-negative");
                 },
                 [](const model::Matern& m) {
                   require(m.alpha > 0.0 && std::isfinite(m.alpha), "model.alpha must be positive");
                   require(m.radius > 0.0 && std::isfinite(m.radius), "model.radius must be positive");
                   require(m.mu >= 0.0 && std::isfinite(m.mu), "model.mu must be non-negative");
                 },
                 [](const model::ExpLgcp& m) {
                   require(std::isfinite(m.mu), "model.mu must be finite");
                   require(m.sigma2 >= 0.0 && std::isfinite(m.sigma2), "model.sigma2 must be non-negative");
                   require(m.alpha > 0.0 && std::isfinite(m.alpha), "model.alpha must be positive");
                 },
                 [](const model::Ginibre&) {},
                 [](const model::BesselDpp& m) {
                   require(m.rho > 0.0 && m.alpha > 0.0, "model.rho and model.alpha must be positive");
                   require(m.rho < 1.0 / (std::numbers::pi * m.alpha * m.alpha),
                           "model.rho must be below 1 / (pi alpha^2)");
                 },
                 [](const model::PerturbedLattice&) {},
                 [](const model::ArcsinCox& m) {
                   require(m.sigma > 0.0 && m.sigma < 1.0, "model.sigma must lie in (0, 1)");
                   require(m.rho > 0.0 && std::isfinite(m.rho), "model.rho must be positive");
                 },
             },
             model);
}

double intensity(const ModelSpec& model) {
  return std::visit(overloaded{
                        [](const model::Poisson& m) { return m.intensity; },
                        [](const model::Thomas& m) { return m.alpha * m.mu; },
                        [](const model::Matern& m) { return m.alpha * m.mu; },
                        [](const model::ExpLgcp& m) { return std::exp(m.mu + 0.5 * m.sigma2); },
                        [](const model::Ginibre&) { return 1.0 / std::numbers::pi; },
                        [](const model::BesselDpp& m) { return m.rho; },
                        [](const model::PerturbedLattice&) { return 1.0; },
                        [](const model::ArcsinCox&) { return 1.0; },
                    },
                    model);
}

double structure_factor_radial(const ModelSpec& model, double t) {
  validate(model);
  t = std::abs(t);
  return std::visit(
      overloaded{
          [](const model::Poisson&) { return 1.0; },
          [t](const model::Thomas& m) { return 1.0 + m.alpha * std::exp(-m.sigma2 * t * t); },
          [t](const model::Matern& m) {
            const double z = m.radius * t;
            const double f = z == 0.0 ? 1.0 : 2.0 * std::cyl_bessel_j(1.0, z) / z;
            return 1.0 + m.alpha * f * f;
          },
          [t](const model::ExpLgcp& m) {
            if (m.sigma2 == 0.0) return 1.0;
            auto h = [&](double s) { return std::expm1(m.sigma2 * std::exp(-s / m.alpha)); };
            return 1.0 + std::exp(m.mu + 0.5 * m.sigma2) * hankel0(h, 40.0 * m.alpha, m.alpha, t);
          },
          [t](const model::Ginibre&) { return -std::expm1(-t * t / 4.0); },
          [t](const model::BesselDpp& m) {
            const double a = 2.0 / m.alpha;
            if (t >= 2.0 * a) return 1.0;
            const double lens = 2.0 * a * a * std::acos(t / (2.0 * a)) - 0.5 * t * std::sqrt(4.0 * a * a - t * t);
            return std::max(0.0, 1.0 - m.rho * std::pow(m.alpha, 4) / 4.0 * lens);
          },
          [](const model::PerturbedLattice&) -> double {
            throw std::invalid_argument("structure_factor_radial: the perturbed lattice is not isotropic");
          },
          [t](const model::ArcsinCox& m) {
            const double s2 = m.sigma * m.sigma;
            auto h = [&](double s) { return std::exp(-s2) * std::sinh(s2 * bump_autocorrelation(s / m.rho)); };
            return 1.0 + hankel0(h, 0.5 * m.rho, 0.05 * m.rho, t);
          },
      },
      model);
}

double structure_factor(const ModelSpec& model, std::span<const double> k) {
  if (std::holds_alternative<model::Poisson>(model)) {
    validate(model);
    return 1.0;
  }
  if (k.size() != 2) throw std::invalid_argument("structure_factor: this model is defined for d = 2");
  if (std::holds_alternative<model::PerturbedLattice>(model)) {
    const double a = sinc(k[0] / 2.0) * sinc(k[1] / 2.0);
    return 1.0 - a * a * std::exp(-std::sqrt(norm(k) / 2.0));
  }
  return structure_factor_radial(model, norm(k));
}

double covariance_value(const CovarianceSpec& cov, double distance) {
  return std::visit(overloaded{
                        [distance](const covariance::Exponential& c) {
                          return c.sigma2 * std::exp(-std::abs(distance) / c.alpha);
                        },
                        [distance](const covariance::ScaledBump& c) {
                          return c.sigma2 * bump_autocorrelation(distance / c.rho);
                        },
                    },
                    cov);
}

double pair_correlation_arcsin(const CovarianceSpec& cov, double distance) {
  const double c0 = covariance_value(cov, 0.0);
  const double c = covariance_value(cov, distance);
  return 1.0 + std::exp(-c0) * std::sinh(c);
}

double thinned_structure_factor(double s_value, double p) {
  if (!(s_value >= 0.0)) throw std::invalid_argument("thinned_structure_factor: S must be non-negative");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("thinned_structure_factor: p must lie in [0, 1]");
  return (1.0 - p) + p * s_value;
}

double chi_square_bound(double sigma, double rho, int d, double volume) {
  if (d < 1) throw std::invalid_argument("chi_square_bound: d must be at least 1");
  if (!(rho > 0.0)) throw std::invalid_argument("chi_square_bound: rho must be positive");
  if (!(volume > 0.0)) throw std::invalid_argument("chi_square_bound: volume must be positive");
  const double x = std::pow(8.0, d) * std::pow(sigma, 4) * std::pow(rho, 2 * d);
  if (!(x < 1.0)) throw std::domain_error("chi_square_bound: 8^d sigma^4 rho^{2d} >= 1, the bound is vacuous");
  const double exponent = volume / std::pow(2.0 * rho, d);
  return std::expm1(-exponent * std::log1p(-x));
}

}  // namespace mtsf
