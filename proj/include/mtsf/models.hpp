#pragma once

#include <span>
#include <string>
#include <variant>

namespace mtsf {

namespace model {

struct Poisson {
  double intensity = 1.0;

  bool operator==(const Poisson&) const = default;
};

/// Neyman-Scott with Gaussian N(0, sigma2 Id) offspring displacement.
struct Thomas {
  double alpha = 5.0;  ///< mean offspring per parent
  double sigma2 = 0.25;
  double mu = 0.2;  ///< parent intensity

  bool operator==(const Thomas&) const = default;
};

/// Neyman-Scott with displacement uniform on B(0, radius).
struct Matern {
  double alpha = 5.0;
  double radius = 1.5;
  double mu = 0.2;

  bool operator==(const Matern&) const = default;
};

/// Log-Gaussian Cox process, field covariance sigma2 exp(-|x| / alpha).
struct ExpLgcp {
  double mu = 0.0;
  double sigma2 = 0.5;
  double alpha = 1.0;

  bool operator==(const ExpLgcp&) const = default;
};

struct Ginibre {
  bool operator==(const Ginibre&) const = default;
};

/// Determinantal process with kernel 2 rho J_1(2|x|/alpha) / (2|x|/alpha).
struct BesselDpp {
  double rho = 0.3;
  double alpha = 1.0;

  bool operator==(const BesselDpp&) const = default;
};

/// Z^2 shifted by a common uniform, per-site uniform and per-site isotropic
/// 1/2-stable displacements.
struct PerturbedLattice {
  bool operator==(const PerturbedLattice&) const = default;
};

/// Cox process with intensity 1 + sin(N(x)), N centered Gaussian with
/// covariance sigma^2 c0(x / rho).
struct ArcsinCox {
  double sigma = 0.5;
  double rho = 1.0;

  bool operator==(const ArcsinCox&) const = default;
};

}  // namespace model

using ModelSpec = std::variant<model::Poisson, model::Thomas, model::Matern, model::ExpLgcp, model::Ginibre,
                               model::BesselDpp, model::PerturbedLattice, model::ArcsinCox>;

/// Short lowercase name used in files and on the command line
/// ("poisson", "thomas", "matern", "lgcp", "ginibre", "bessel", "lattice",
/// "arcsin_cox").
std::string model_name(const ModelSpec& model);

/// Throws std::invalid_argument naming the offending parameter.
void validate(const ModelSpec& model);

/// Intensity lambda of the model.
double intensity(const ModelSpec& model);

/// Theoretical structure factor at frequency k. Poisson works in any
/// dimension, the other models are planar (k of size 2).
double structure_factor(const ModelSpec& model, std::span<const double> k);

/// Radial form S(|k|) for the isotropic models. Throws for the perturbed
/// lattice, which is not isotropic.
double structure_factor_radial(const ModelSpec& model, double k_norm);

/// Covariance function of a stationary Gaussian field.
namespace covariance {
struct Exponential {
  double sigma2 = 1.0;
  double alpha = 1.0;
};
/// sigma2 * c0(x / rho) with c0 the normalised self-convolution of the bump
/// exp(-1 / (1 - |4x|^2)) on B(0, 1/4); supported in B(0, rho / 2).
struct ScaledBump {
  double sigma2 = 1.0;
  double rho = 1.0;
};
}  // namespace covariance

using CovarianceSpec = std::variant<covariance::Exponential, covariance::ScaledBump>;

/// c(|x|) of a planar covariance.
double covariance_value(const CovarianceSpec& cov, double distance);

/// c0(t) for the planar bump autocorrelation: c0(0) = 1, c0(t) = 0 for t >= 1/2.
double bump_autocorrelation(double t);

/// Pair correlation of the arcsin Cox process:
/// g_c(x) = 1 + (e^{-c(0)} / 2) (e^{c(x)} - e^{-c(x)}).
double pair_correlation_arcsin(const CovarianceSpec& cov, double distance);

/// (1 - p) + p S: structure factor after independent p-thinning.
double thinned_structure_factor(double s_value, double p);

/// (1 - 8^d sigma^4 rho^{2d})^{-|W| / (2^d rho^d)} - 1. Throws
/// std::domain_error when 8^d sigma^4 rho^{2d} >= 1 (the bound is vacuous).
double chi_square_bound(double sigma, double rho, int d, double volume);

}  // namespace mtsf
