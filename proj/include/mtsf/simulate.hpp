#pragma once

#include <array>
#include <variant>
#include <vector>

#include "mtsf/gaussian_field.hpp"
#include "mtsf/models.hpp"
#include "mtsf/pattern.hpp"
#include "mtsf/rng.hpp"

namespace mtsf {

/// Homogeneous Poisson process: Poisson(intensity |W|) i.i.d. uniform points.
PointPattern sample_poisson(double intensity, const Window& window, const RngSeed& seed);

struct ThomasKernel {
  double sigma2;
};
struct MaternKernel {
  double radius;
};
using ClusterKernel = std::variant<ThomasKernel, MaternKernel>;

/// Neyman-Scott cluster process. Parents are Poisson(mu) on the window
/// dilated by a guard (6 sigma for Thomas, the radius for Matern, times
/// guard_scale); each has Poisson(alpha) offspring. mu = 0 gives an empty
/// pattern.
PointPattern sample_neyman_scott(const ClusterKernel& kernel, double alpha, double mu, const Window& window,
                                 const RngSeed& seed, double guard_scale = 1.0);

/// Log-Gaussian Cox process: field with covariance sigma2 e^{-|x|/alpha} on a
/// grid of spacing about h over W, then cell-wise Poisson counts with mean
/// exp(mu + N_cell) |cell|.
PointPattern sample_lgcp(double mu, double sigma2, double alpha, const Window& window, double h, const RngSeed& seed,
                         FieldMethod method = FieldMethod::circulant);

/// Planar perturbed lattice {x + V_x + U_x + U}. Sites within `margin` of the
/// window are simulated exactly; the heavy-tailed contribution of farther
/// sites is added as the equivalent Poisson stream. margin <= 0 selects
/// max(10, 2 R).
PointPattern sample_perturbed_lattice(const Window& window, const RngSeed& seed, double margin = 0.0);

/// Positive a-stable variable with Laplace transform e^{-s^a}, 0 < a < 1.
double sample_positive_stable(Philox& rng, double a);

/// Isotropic planar 1/2-stable displacement with characteristic function
/// exp(-sqrt(|k| / 2) / 2).
std::array<double, 2> sample_stable_displacement(Philox& rng);

/// Eigenvalues of an n x n complex Ginibre matrix restricted to W, with
/// sqrt(n) = bulk_factor * (half-diagonal of W).
PointPattern sample_ginibre(const Window& window, const RngSeed& seed, double bulk_factor = 1.5);

/// Arcsin Cox process with intensity 1 + sin(N(x)), N with covariance
/// sigma^2 c0(x / rho) on a grid of spacing about h.
PointPattern sample_arcsin_cox(double sigma, double rho, const Window& window, double h, const RngSeed& seed);

struct ThinResult {
  PointPattern kept;
  PointPattern complement;
};

/// Keep/drop decisions of an independent p-thinning of n points (1 = keep).
std::vector<char> thinning_mask(std::size_t n, double p, const RngSeed& seed);

/// Independent p-thinning; both parts keep the input order.
ThinResult thin(const PointPattern& pattern, double p, const RngSeed& seed);

struct SimulationOptions {
  double grid_spacing = 0.0;  ///< 0 selects min(0.25, scale / 10)
  double guard_scale = 1.0;
};

/// Simulates any model that has a sampler (all but the Bessel DPP).
PointPattern simulate(const ModelSpec& model, const Window& window, const RngSeed& seed,
                      const SimulationOptions& options = {});

}  // namespace mtsf
