#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mtsf/hermite.hpp"
#include "mtsf/pattern.hpp"

namespace mtsf {

enum class IntensityMode { oracle, plugin };

struct SpectralEstimate {
  std::vector<double> frequency;
  double value = 0.0;
  std::size_t taper_count = 0;
  IntensityMode intensity_mode = IntensityMode::oracle;
  double intensity = 0.0;  ///< lambda used (lambda-hat for plug-in)
  std::vector<std::complex<double>> per_taper;  ///< C_i, filled on request
};

/// T_i(k0) = sum_{x in pattern} e^{-i k0.x} f_i(x).
std::complex<double> linear_statistic(const PointPattern& pattern, const TaperBasis& basis, const HermiteIndex& i,
                                      std::span<const double> k0);

/// T_i(k0) for every index of the basis, in basis order.
std::vector<std::complex<double>> linear_statistics(const PointPattern& pattern, const TaperBasis& basis,
                                                    std::span<const double> k0);

/// C_i = T_i(k0) - lambda int_W f_i(x) e^{-i k0.x} dx.
std::complex<double> centered_statistic(const PointPattern& pattern, const TaperBasis& basis, const HermiteIndex& i,
                                        std::span<const double> k0, double lambda);

/// (1 / (lambda |I|)) sum_i |T_i - lambda F_i|^2 for precomputed linear
/// statistics T and window integrals F; 0 when lambda == 0.
double multitaper_value(std::span<const std::complex<double>> T, std::span<const std::complex<double>> F,
                        double lambda);

/// Multitaper estimate with known intensity lambda > 0.
SpectralEstimate multitaper_oracle(const PointPattern& pattern, const TaperBasis& basis, std::span<const double> k0,
                                   double lambda, bool keep_per_taper = false);

/// Multitaper estimate with lambda-hat = n / |W|; exactly 0 for an empty
/// pattern.
SpectralEstimate multitaper_plugin(const PointPattern& pattern, const TaperBasis& basis, std::span<const double> k0,
                                   bool keep_per_taper = false);

struct RiskBoundTerms {
  double variance_term = 0.0;  ///< sqrt(2) S_inf / sqrt(|I|)
  double f_loc = 0.0;
  double w_loc = 0.0;
  double b4 = 0.0;
};

/// Terms of the L2-risk bound for a taper family observed in `window`.
/// gamma4 is the inner sum of (1 + 7|gamma_2| + 6|gamma_3| + |gamma_4|)^{1/2}.
RiskBoundTerms risk_bound_terms(const TaperBasis& basis, const Window& window, double beta, double L, double S_inf,
                                double gamma4);

}  // namespace mtsf
