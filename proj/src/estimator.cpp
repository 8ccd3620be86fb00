#include "mtsf/estimator.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "mtsf/kernels.hpp"

namespace mtsf {

namespace {

void check_dims(const PointPattern& pattern, const TaperBasis& basis, std::span<const double> k0) {
  if (pattern.dim() != basis.dim()) throw std::invalid_argument("estimator: pattern and basis dimensions differ");
  if (k0.size() != basis.dim()) throw std::invalid_argument("estimator: frequency dimension mismatch");
}

void check_index(const TaperBasis& basis, const HermiteIndex& i) {
  if (!basis.contains(i)) throw std::invalid_argument("estimator: index is not part of the basis");
}

SpectralEstimate estimate(const PointPattern& pattern, const TaperBasis& basis, std::span<const double> k0,
                          double lambda, IntensityMode mode, bool keep_per_taper) {
  SpectralEstimate out;
  out.frequency.assign(k0.begin(), k0.end());
  out.taper_count = basis.size();
  out.intensity_mode = mode;
  out.intensity = lambda;
  if (lambda == 0.0) return out;
  const auto T = linear_statistics(pattern, basis, k0);
  const auto F = windowed_fourier_integrals(basis, k0, pattern.window());
  out.value = multitaper_value(T, F, lambda);
  if (keep_per_taper) {
    out.per_taper.resize(T.size());
    for (std::size_t j = 0; j < T.size(); ++j) out.per_taper[j] = T[j] - lambda * F[j];
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> linear_statistics(const PointPattern& pattern, const TaperBasis& basis,
                                                    std::span<const double> k0) {
  check_dims(pattern, basis, k0);
  const auto tables = kernel::hermite_tables(pattern, basis.r(), basis.i_max());
  auto grid = kernel::grid_statistics(pattern, tables, k0);
  if (basis.parity() == Parity::any) return grid;
  std::vector<std::complex<double>> out;
  out.reserve(basis.size());
  for (const auto& i : basis.indices()) out.push_back(grid[basis.grid_position(i)]);
  return out;
}

std::complex<double> linear_statistic(const PointPattern& pattern, const TaperBasis& basis, const HermiteIndex& i,
                                      std::span<const double> k0) {
  check_dims(pattern, basis, k0);
  check_index(basis, i);
  std::complex<double> sum = 0.0;
  for (std::size_t p = 0; p < pattern.size(); ++p) {
    const auto x = pattern.point(p);
    double phase = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) phase += k0[s] * x[s];
    sum += taper_value(basis, i, x) * std::complex<double>(std::cos(phase), -std::sin(phase));
  }
  return sum;
}

std::complex<double> centered_statistic(const PointPattern& pattern, const TaperBasis& basis, const HermiteIndex& i,
                                        std::span<const double> k0, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("centered_statistic: lambda must be positive");
  return linear_statistic(pattern, basis, i, k0) - lambda * windowed_fourier_integral(basis, i, k0, pattern.window());
}

double multitaper_value(std::span<const std::complex<double>> T, std::span<const std::complex<double>> F,
                        double lambda) {
  if (T.size() != F.size() || T.empty()) throw std::invalid_argument("multitaper_value: size mismatch");
  if (lambda == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < T.size(); ++j) sum += std::norm(T[j] - lambda * F[j]);
  return sum / (lambda * static_cast<double>(T.size()));
}

SpectralEstimate multitaper_oracle(const PointPattern& pattern, const TaperBasis& basis, std::span<const double> k0,
                                   double lambda, bool keep_per_taper) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("multitaper_oracle: lambda must be positive");
  check_dims(pattern, basis, k0);
  return estimate(pattern, basis, k0, lambda, IntensityMode::oracle, keep_per_taper);
}

SpectralEstimate multitaper_plugin(const PointPattern& pattern, const TaperBasis& basis, std::span<const double> k0,
                                   bool keep_per_taper) {
  check_dims(pattern, basis, k0);
  const double lambda_hat = static_cast<double>(pattern.size()) / pattern.window().volume();
  return estimate(pattern, basis, k0, lambda_hat, IntensityMode::plugin, keep_per_taper);
}

RiskBoundTerms risk_bound_terms(const TaperBasis& basis, const Window& window, double beta, double L, double S_inf,
                                double gamma4) {
  if (!(beta > 0.0 && beta <= 2.0)) throw std::invalid_argument("risk_bound_terms: beta must lie in (0, 2]");
  if (!(L > 0.0)) throw std::invalid_argument("risk_bound_terms: L must be positive");
  if (!(S_inf > 0.0)) throw std::invalid_argument("risk_bound_terms: S_inf must be positive");
  if (!(gamma4 >= 0.0)) throw std::invalid_argument("risk_bound_terms: gamma4 must be non-negative");
  if (window.dim() != basis.dim()) throw std::invalid_argument("risk_bound_terms: window dimension mismatch");
  const std::size_t d = basis.dim();
  const double r = basis.r();
  const double count = static_cast<double>(basis.size());

  // Tail and L4 factors are separable: cache them per axis and degree.
  std::vector<std::vector<double>> inside(d), l4(d);
  for (std::size_t s = 0; s < d; ++s) {
    for (int n = 0; n < basis.i_max(); ++n) {
      const double t = tail_mass(HermiteIndex{n}, window.half_width(s) / r, 2);
      inside[s].push_back(1.0 - t * t);
      l4[s].push_back(l4_norm_sq(HermiteIndex{n}));
    }
  }

  double sobolev = 0.0, tail_sq = 0.0, l4_sum = 0.0;
  for (const auto& i : basis.indices()) {
    sobolev += sobolev_norm_sq(i, beta);
    double in = 1.0, l4_prod = 1.0;
    for (std::size_t s = 0; s < d; ++s) {
      in *= inside[s][static_cast<std::size_t>(i[s])];
      l4_prod *= l4[s][static_cast<std::size_t>(i[s])];
    }
    tail_sq += std::max(0.0, 1.0 - in);
    l4_sum += l4_prod;
  }

  RiskBoundTerms terms;
  terms.variance_term = std::numbers::sqrt2 * S_inf / std::sqrt(count);
  terms.f_loc = std::sqrt(static_cast<double>(d)) * L * std::pow(r, -beta) * sobolev / count;
  terms.w_loc = std::sqrt(tail_sq / count);
  terms.b4 = std::pow(r, -0.5 * static_cast<double>(d)) * l4_sum / count * std::sqrt(gamma4);
  return terms;
}

}  // namespace mtsf
