#include "mtsf/simulate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mtsf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::uint64_t poisson_count(Philox& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

void require_planar(const Window& window, const char* who) {
  if (window.dim() != 2) throw std::invalid_argument(std::string(who) + ": only d = 2 is supported");
}

double max_half_width(const Window& window) {
  return *std::max_element(window.half_widths().begin(), window.half_widths().end());
}

// Regular grid covering W with spacing close to h: n_s = ceil(2 R_s / h).
struct CellGrid {
  std::vector<std::size_t> shape;
  std::vector<double> spacing;

  CellGrid(const Window& window, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing h must be positive");
    for (double R : window.half_widths()) {
      const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * R / h - 1e-9)));
      shape.push_back(n);
      spacing.push_back(2.0 * R / static_cast<double>(n));
    }
  }

  std::size_t cells() const {
    std::size_t c = 1;
    for (std::size_t n : shape) c *= n;
    return c;
  }

  double cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
  }

  std::size_t locate(std::span<const double> x, const Window& window) const {
    std::size_t flat = 0;
    for (std::size_t s = 0; s < shape.size(); ++s) {
      const double pos = (x[s] + window.half_width(s)) / spacing[s];
      const auto j = std::min(shape[s] - 1, static_cast<std::size_t>(std::max(0.0, pos)));
      flat = flat * shape[s] + j;
    }
    return flat;
  }
};

}  // namespace

PointPattern sample_poisson(double intensity, const Window& window, const RngSeed& seed) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) throw std::invalid_argument("sample_poisson: intensity must be non-negative");
  Philox rng(seed);
  const std::uint64_t n = poisson_count(rng, intensity * window.volume());
  PointPattern out(window);
  out.reserve(n);
  std::vector<double> x(window.dim());
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < x.size(); ++s) x[s] = window.half_width(s) * (2.0 * rng.uniform() - 1.0);
    out.push_back(x);
  }
  return out;
}

PointPattern sample_neyman_scott(const ClusterKernel& kernel, double alpha, double mu, const Window& window,
                                 const RngSeed& seed, double guard_scale) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sample_neyman_scott: alpha must be positive");
  if (!(mu >= 0.0)) throw std::invalid_argument("sample_neyman_scott: mu must be non-negative");
  if (!(guard_scale >= 0.0)) throw std::invalid_argument("sample_neyman_scott: guard_scale must be non-negative");
  const std::size_t d = window.dim();
  double guard = 0.0;
  std::visit(overloaded{
                 [&](const ThomasKernel& k) {
                   if (!(k.sigma2 > 0.0)) throw std::invalid_argument("sample_neyman_scott: sigma2 must be positive");
                   guard = 6.0 * std::sqrt(k.sigma2);
                 },
                 [&](const MaternKernel& k) {
                   if (!(k.radius > 0.0)) throw std::invalid_argument("sample_neyman_scott: radius must be positive");
                   guard = k.radius;
                 },
             },
             kernel);
  guard *= guard_scale;

  Philox rng(seed);
  std::vector<double> parent_box(d);
  double parent_volume = 1.0;
  for (std::size_t s = 0; s < d; ++s) {
    parent_box[s] = window.half_width(s) + guard;
    parent_volume *= 2.0 * parent_box[s];
  }
  const std::uint64_t parents = poisson_count(rng, mu * parent_volume);

  std::normal_distribution<double> normal;
  PointPattern out(window);
  out.reserve(static_cast<std::size_t>(alpha * mu * window.volume() * 1.2));
  std::vector<double> centre(d), x(d), offset(d);
  for (std::uint64_t p = 0; p < parents; ++p) {
    for (std::size_t s = 0; s < d; ++s) centre[s] = parent_box[s] * (2.0 * rng.uniform() - 1.0);
    const std::uint64_t children = poisson_count(rng, alpha);
    for (std::uint64_t c = 0; c < children; ++c) {
      if (const auto* t = std::get_if<ThomasKernel>(&kernel)) {
        const double sd = std::sqrt(t->sigma2);
        for (std::size_t s = 0; s < d; ++s) offset[s] = sd * normal(rng);
      } else {
        const double radius = std::get<MaternKernel>(kernel).radius;
        double r2;
        do {
          r2 = 0.0;
          for (std::size_t s = 0; s < d; ++s) {
            offset[s] = 2.0 * rng.uniform() - 1.0;
            r2 += offset[s] * offset[s];
          }
        } while (r2 > 1.0);
        for (double& v : offset) v *= radius;
      }
      for (std::size_t s = 0; s < d; ++s) x[s] = centre[s] + offset[s];
      if (window.contains(x)) out.push_back(x);
    }
  }
  return out;
}

PointPattern sample_lgcp(double mu, double sigma2, double alpha, const Window& window, double h, const RngSeed& seed,
                         FieldMethod method) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("sample_lgcp: sigma2 must be non-negative");
  if (!(alpha > 0.0)) throw std::invalid_argument("sample_lgcp: alpha must be positive");
  if (!std::isfinite(mu)) throw std::invalid_argument("sample_lgcp: mu must be finite");
  const CellGrid grid(window, h);
  Philox rng(seed);

  std::vector<double> field(grid.cells(), 0.0);
  if (sigma2 > 0.0) {
    const GaussianFieldSampler sampler([=](double t) { return sigma2 * std::exp(-t / alpha); }, grid.shape,
                                       grid.spacing, method);
    field = sampler.sample(rng);
  }

  const std::size_t d = window.dim();
  const double cell_volume = grid.cell_volume();
  PointPattern out(window);
  std::vector<std::size_t> index(d);
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < field.size(); ++flat) {
    const std::uint64_t n = poisson_count(rng, std::exp(mu + field[flat]) * cell_volume);
    if (n == 0) continue;
    std::size_t rest = flat;
    for (std::size_t s = d; s-- > 0;) {
      index[s] = rest % grid.shape[s];
      rest /= grid.shape[s];
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < d; ++s) {
        const double lo = -window.half_width(s) + grid.spacing[s] * static_cast<double>(index[s]);
        x[s] = std::min(lo + grid.spacing[s] * rng.uniform(), window.half_width(s));
      }
      out.push_back(x);
    }
  }
  return out;
}

double sample_positive_stable(Philox& rng, double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("sample_positive_stable: a must lie in (0, 1)");
  // Kanter's representation: (K(U) / E)^{(1-a)/a} with U ~ U(0, pi), E ~ Exp(1).
  const double u = std::numbers::pi * rng.uniform_open();
  const double e = -std::log(rng.uniform_open());
  const double k = std::pow(std::pow(std::sin(a * u), a) * std::pow(std::sin((1.0 - a) * u), 1.0 - a) / std::sin(u),
                            1.0 / (1.0 - a));
  return std::pow(k / e, (1.0 - a) / a);
}

std::array<double, 2> sample_stable_displacement(Philox& rng) {
  // Sub-Gaussian construction: sqrt(A) G with A positive 1/4-stable and
  // G ~ N(0, Id / 32) has characteristic function exp(-(|k|^2 / 64)^{1/4}).
  std::normal_distribution<double> normal(0.0, std::sqrt(1.0 / 32.0));
  const double scale = std::sqrt(sample_positive_stable(rng, 0.25));
  const double g0 = normal(rng);
  const double g1 = normal(rng);
  return {scale * g0, scale * g1};
}

PointPattern sample_perturbed_lattice(const Window& window, const RngSeed& seed, double margin) {
  require_planar(window, "sample_perturbed_lattice");
  const double R = max_half_width(window);
  if (margin <= 0.0) margin = std::max(10.0, 2.0 * R);
  const auto N = static_cast<long>(std::ceil(R + margin));
  const double box = static_cast<double>(N) + 0.5;

  Philox rng(seed);
  const double u0 = rng.uniform() - 0.5;
  const double u1 = rng.uniform() - 0.5;
  PointPattern out(window);
  out.reserve(static_cast<std::size_t>(window.volume() * 1.2));
  std::array<double, 2> x;
  for (long a = -N; a <= N; ++a) {
    for (long b = -N; b <= N; ++b) {
      const double ua = rng.uniform() - 0.5;
      const double ub = rng.uniform() - 0.5;
      const auto v = sample_stable_displacement(rng);
      x = {static_cast<double>(a) + ua + v[0] + u0, static_cast<double>(b) + ub + v[1] + u1};
      if (window.contains(x)) out.push_back(x);
    }
  }

  // Sites outside [-N, N]^2 reach W only through rare heavy-tailed jumps. Their
  // superposition is Poisson with intensity P(y - U - V not in B) at y, with
  // B = [-N - 1/2, N + 1/2]^2 the union of the near cells.
  const std::uint64_t candidates = poisson_count(rng, window.volume());
  for (std::uint64_t c = 0; c < candidates; ++c) {
    x = {window.half_width(0) * (2.0 * rng.uniform() - 1.0), window.half_width(1) * (2.0 * rng.uniform() - 1.0)};
    const auto v = sample_stable_displacement(rng);
    const double z0 = x[0] - u0 - v[0];
    const double z1 = x[1] - u1 - v[1];
    if (!(std::abs(z0) <= box && std::abs(z1) <= box)) out.push_back(x);
  }
  return out;
}

PointPattern sample_ginibre(const Window& window, const RngSeed& seed, double bulk_factor) {
  require_planar(window, "sample_ginibre");
  if (!(bulk_factor >= 1.0)) throw std::invalid_argument("sample_ginibre: bulk_factor must be at least 1");
  double diag2 = 0.0;
  for (double R : window.half_widths()) diag2 += R * R;
  const double radius = bulk_factor * std::sqrt(diag2);
  const auto n = static_cast<Eigen::Index>(std::ceil(radius * radius));

  // Unitary Hessenberg reduction of a Ginibre matrix: i.i.d. CN(0, 1) on and
  // above the diagonal, |H_{j+1,j}|^2 ~ Gamma(n - 1 - j, 1) below it.
  Philox rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      H(i, j) = {re, im};
    }
    if (j + 1 < n) {
      std::gamma_distribution<double> gamma(static_cast<double>(n - 1 - j), 1.0);
      H(j + 1, j) = std::sqrt(gamma(rng));
    }
  }
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(n);
  schur.computeFromHessenberg(H, Eigen::MatrixXcd::Identity(n, n), false);
  if (schur.info() != Eigen::Success) throw std::runtime_error("sample_ginibre: Schur decomposition did not converge");

  PointPattern out(window);
  std::array<double, 2> x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> z = schur.matrixT()(i, i);
    x = {z.real(), z.imag()};
    if (window.contains(x)) out.push_back(x);
  }
  return out;
}

PointPattern sample_arcsin_cox(double sigma, double rho, const Window& window, double h, const RngSeed& seed) {
  require_planar(window, "sample_arcsin_cox");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sample_arcsin_cox: sigma must lie in (0, 1)");
  if (!(rho > 0.0)) throw std::invalid_argument("sample_arcsin_cox: rho must be positive");
  const CellGrid grid(window, h);
  Philox rng(seed);
  const double s2 = sigma * sigma;
  const GaussianFieldSampler sampler([=](double t) { return s2 * bump_autocorrelation(t / rho); }, grid.shape,
                                     grid.spacing);
  const std::vector<double> field = sampler.sample(rng);

  // Poisson(2) thinned with retention (1 + sin N) / 2.
  const PointPattern base = sample_poisson(2.0, window, seed.child(stream::simulate));
  PointPattern out(window);
  out.reserve(base.size() / 2 + 16);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto x = base.point(i);
    const double keep = 0.5 * (1.0 + std::sin(field[grid.locate(x, window)]));
    if (rng.uniform() < keep) out.push_back(x);
  }
  return out;
}

std::vector<char> thinning_mask(std::size_t n, double p, const RngSeed& seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("thin: p must lie in [0, 1]");
  Philox rng(seed);
  std::vector<char> keep(n);
  for (auto& k : keep) k = rng.uniform() < p ? 1 : 0;
  return keep;
}

ThinResult thin(const PointPattern& pattern, double p, const RngSeed& seed) {
  const auto keep = thinning_mask(pattern.size(), p, seed);
  ThinResult result{PointPattern(pattern.window()), PointPattern(pattern.window())};
  result.kept.reserve(static_cast<std::size_t>(p * pattern.size()) + 16);
  result.complement.reserve(static_cast<std::size_t>((1.0 - p) * pattern.size()) + 16);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    (keep[i] ? result.kept : result.complement).push_back(pattern.point(i));
  }
  return result;
}

PointPattern simulate(const ModelSpec& model, const Window& window, const RngSeed& seed,
                      const SimulationOptions& options) {
  validate(model);
  auto spacing = [&](double scale) {
    return options.grid_spacing > 0.0 ? options.grid_spacing : std::min(0.25, scale / 10.0);
  };
  return std::visit(
      overloaded{
          [&](const model::Poisson& m) { return sample_poisson(m.intensity, window, seed); },
          [&](const model::Thomas& m) {
            return sample_neyman_scott(ThomasKernel{m.sigma2}, m.alpha, m.mu, window, seed, options.guard_scale);
          },
          [&](const model::Matern& m) {
            return sample_neyman_scott(MaternKernel{m.radius}, m.alpha, m.mu, window, seed, options.guard_scale);
          },
          [&](const model::ExpLgcp& m) {
            return sample_lgcp(m.mu, m.sigma2, m.alpha, window, spacing(m.alpha), seed);
          },
          [&](const model::Ginibre&) { return sample_ginibre(window, seed, 1.5 * options.guard_scale); },
          [&](const model::BesselDpp&) -> PointPattern {
            throw std::invalid_argument("simulate: no sampler for the Bessel DPP (theory curve only)");
          },
          [&](const model::PerturbedLattice&) {
            const double R = max_half_width(window);
            return sample_perturbed_lattice(window, seed, std::max(10.0, 2.0 * R) * options.guard_scale);
          },
          [&](const model::ArcsinCox& m) {
            return sample_arcsin_cox(m.sigma, m.rho, window, spacing(m.rho), seed);
          },
      },
      model);
}

}  // namespace mtsf
