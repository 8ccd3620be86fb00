#include "mtsf/hermite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mtsf/pattern.hpp"
#include "mtsf/quadrature.hpp"

namespace mtsf {

HermiteIndex::HermiteIndex(std::initializer_list<int> components)
    : HermiteIndex(std::vector<int>(components)) {}

HermiteIndex::HermiteIndex(std::vector<int> components) : components_(std::move(components)) {
  for (int c : components_) {
    if (c < 0) throw std::invalid_argument("HermiteIndex: components must be non-negative");
  }
}

int HermiteIndex::max_component() const {
  return components_.empty() ? 0 : *std::max_element(components_.begin(), components_.end());
}

int HermiteIndex::total_order() const {
  int total = 0;
  for (int c : components_) total += c;
  return total;
}

namespace {

constexpr double kPiQuarterInv = 0.75112554446494248286;  // pi^{-1/4}
constexpr double kRescale = 1e150;
constexpr double kRescaleInv = 1e-150;
const double kLogRescale = std::log(kRescale);

// Recurrence coefficients a_n = sqrt(2/(n+1)), b_n = sqrt(n/(n+1)).
constexpr std::size_t kTableSize = 4096;

struct RecurrenceTable {
  std::array<double, kTableSize> a;
  std::array<double, kTableSize> b;
  RecurrenceTable() {
    for (std::size_t n = 0; n < kTableSize; ++n) {
      a[n] = std::sqrt(2.0 / (n + 1.0));
      b[n] = std::sqrt(n / (n + 1.0));
    }
  }
};

const RecurrenceTable& recurrence_table() {
  static const RecurrenceTable table;
  return table;
}

}  // namespace

void hermite_functions(double y, std::span<double> out) {
  const std::size_t count = out.size();
  if (count == 0) return;
  const auto& table = recurrence_table();

  // The recurrence runs on unscaled polynomial values p_n; the Gaussian factor
  // lives in log_scale and is applied on output.
  double log_scale = -0.5 * y * y;
  double factor = std::exp(log_scale);
  auto emit = [&](std::size_t n, double p) {
    if (log_scale > -700.0) {
      out[n] = p * factor;
    } else {
      out[n] = p == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(p)) + log_scale), p);
    }
  };

  double prev = 0.0;
  double cur = kPiQuarterInv;
  emit(0, cur);
  for (std::size_t n = 0; n + 1 < count; ++n) {
    double a, b;
    if (n < kTableSize) {
      a = table.a[n];
      b = table.b[n];
    } else {
      a = std::sqrt(2.0 / (n + 1.0));
      b = std::sqrt(n / (n + 1.0));
    }
    const double next = a * y * cur - b * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur *= kRescaleInv;
      prev *= kRescaleInv;
      log_scale += kLogRescale;
      factor = std::exp(log_scale);
    }
    emit(n + 1, cur);
  }
}

double hermite_function(int n, double y) {
  if (n < 0) throw std::invalid_argument("hermite_function: n must be non-negative");
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  hermite_functions(y, values);
  return values.back();
}

double psi(const HermiteIndex& i, std::span<const double> x) {
  if (i.dim() != x.size()) throw std::invalid_argument("psi: dimension mismatch between index and point");
  double value = 1.0;
  for (std::size_t s = 0; s < x.size(); ++s) value *= hermite_function(i[s], x[s]);
  return value;
}

double dilation_factor(double R, int i_max, double theta) {
  if (!(theta > 0.0 && theta < 2.0 / 3.0)) throw std::invalid_argument("dilation_factor: theta must lie in (0, 2/3)");
  if (!(R > 0.0)) throw std::invalid_argument("dilation_factor: R must be positive");
  if (i_max < 1) throw std::invalid_argument("dilation_factor: i_max must be at least 1");
  return R / std::sqrt(2.0 * i_max + std::pow(static_cast<double>(i_max), 1.0 / 3.0 + theta));
}

TaperBasis TaperBasis::hermite(std::size_t d, int i_max, double R, double theta, Parity parity) {
  return TaperBasis(d, i_max, dilation_factor(R, i_max, theta), R, theta, parity);
}

TaperBasis::TaperBasis(std::size_t d, int i_max, double r, double R, double theta, Parity parity)
    : d_(d), i_max_(i_max), r_(r), R_(R), theta_(theta), parity_(parity) {
  if (d == 0) throw std::invalid_argument("TaperBasis: dimension must be at least 1");
  if (i_max < 1) throw std::invalid_argument("TaperBasis: i_max must be at least 1");
  if (!(r > 0.0) || !(R > 0.0)) throw std::invalid_argument("TaperBasis: r and R must be positive");
  if (!(theta > 0.0 && theta < 2.0 / 3.0)) throw std::invalid_argument("TaperBasis: theta must lie in (0, 2/3)");

  std::vector<int> c(d, 0);
  for (;;) {
    int order = 0;
    for (int v : c) order += v;
    if (parity_ == Parity::any || (parity_ == Parity::even) == (order % 2 == 0)) indices_.emplace_back(c);
    std::size_t s = d;
    while (s > 0) {
      --s;
      if (++c[s] < i_max) break;
      c[s] = 0;
      if (s == 0) return;
    }
  }
}

bool TaperBasis::contains(const HermiteIndex& i) const {
  if (i.dim() != d_) return false;
  if (i.max_component() >= i_max_) return false;
  if (parity_ == Parity::any) return true;
  return (parity_ == Parity::even) == (i.total_order() % 2 == 0);
}

std::size_t TaperBasis::grid_position(const HermiteIndex& i) const {
  std::size_t pos = 0;
  for (std::size_t s = 0; s < d_; ++s) pos = pos * static_cast<std::size_t>(i_max_) + static_cast<std::size_t>(i[s]);
  return pos;
}

double taper_value(const TaperBasis& basis, const HermiteIndex& i, std::span<const double> x) {
  if (!basis.contains(i)) throw std::invalid_argument("taper_value: index is not part of the basis");
  if (x.size() != basis.dim()) throw std::invalid_argument("taper_value: dimension mismatch");
  double value = std::pow(basis.r(), -0.5 * static_cast<double>(basis.dim()));
  for (std::size_t s = 0; s < x.size(); ++s) value *= hermite_function(i[s], x[s] / basis.r());
  return value;
}

namespace {

// Beyond the turning point sqrt(2n+1) psi_n decays super-exponentially; this
// margin leaves nothing above double-precision round-off.
double effective_support(int n) { return std::sqrt(2.0 * n + 1.0) + 14.0; }

// Integral of g over [a, b] as a sum of unit-length adaptive pieces.
double integrate_pieces(const std::function<double(double)>& g, double a, double b, double abs_tol) {
  if (!(b > a)) return 0.0;
  const auto pieces = static_cast<std::size_t>(std::ceil(b - a));
  const double width = (b - a) / static_cast<double>(pieces);
  double total = 0.0;
  for (std::size_t p = 0; p < pieces; ++p) {
    const double lo = a + width * p;
    const double hi = p + 1 == pieces ? b : lo + width;
    total += integrate_adaptive(g, lo, hi, abs_tol / static_cast<double>(pieces));
  }
  return total;
}

}  // namespace

double sobolev_norm_sq(const HermiteIndex& i, double beta) {
  if (!(beta > 0.0 && beta <= 2.0)) throw std::invalid_argument("sobolev_norm_sq: beta must lie in (0, 2]");
  if (i.dim() == 0) throw std::invalid_argument("sobolev_norm_sq: empty index");
  if (beta == 2.0) {
    double total = 0.0;
    for (int c : i.components()) total += 0.5 * (2.0 * c + 1.0);
    return total;
  }
  // |F[psi_i]| = |psi_i|, so the integral is taken over psi_i^2 directly.
  const std::size_t d = i.dim();
  const double upper = effective_support(i.total_order());
  const double tol = 1e-11;
  if (d == 1) {
    const int n = i[0];
    auto g = [&](double s) {
      const double v = hermite_function(n, s);
      return 2.0 * v * v * std::pow(s, beta);
    };
    return integrate_pieces(g, 0.0, upper, tol);
  }
  if (d == 2) {
    // psi_i(s e_phi)^2 = e^{-s^2} x trig polynomial of degree 2|i|_1 in phi, so
    // the trapezoid rule with more points than that degree is exact.
    const int m = 2 * i.total_order() + 8;
    auto g = [&](double s) {
      double angular = 0.0;
      for (int j = 0; j < m; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / m;
        const double v = hermite_function(i[0], s * std::cos(phi)) * hermite_function(i[1], s * std::sin(phi));
        angular += v * v;
      }
      angular *= 2.0 * std::numbers::pi / m;
      return angular * std::pow(s, beta + 1.0);
    };
    return integrate_pieces(g, 0.0, upper, tol);
  }
  if (d == 3) {
    // On the sphere the integrand is a polynomial of degree 2|i|_1 in z after
    // the phi average, hence Gauss-Legendre in z and trapezoid in phi.
    const QuadratureRule gl = gauss_legendre(static_cast<std::size_t>(i.total_order()) + 2);
    const int m = 2 * i.total_order() + 8;
    auto g = [&](double s) {
      double sphere = 0.0;
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double z = gl.nodes[q];
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double vz = hermite_function(i[2], s * z);
        double ring = 0.0;
        for (int j = 0; j < m; ++j) {
          const double phi = 2.0 * std::numbers::pi * j / m;
          const double v = hermite_function(i[0], s * rho * std::cos(phi)) *
                           hermite_function(i[1], s * rho * std::sin(phi)) * vz;
          ring += v * v;
        }
        sphere += gl.weights[q] * ring * 2.0 * std::numbers::pi / m;
      }
      return sphere * std::pow(s, beta + 2.0);
    };
    return integrate_pieces(g, 0.0, upper, tol);
  }
  throw std::invalid_argument("sobolev_norm_sq: beta < 2 is only supported for d <= 3");
}

namespace {

// Integral of a smooth g over [a, b] by 20-point Gauss-Legendre panels no
// wider than h.
double panel_integral(const std::function<double(double)>& g, double a, double b, double h) {
  if (!(b > a)) return 0.0;
  static const QuadratureRule gl = gauss_legendre(20);
  return integrate_panels(g, a, b, static_cast<std::size_t>(std::ceil((b - a) / h)), gl);
}

// 2 int_rho^inf |psi_n|^p dx. psi_n^2 is smooth; |psi_n| is smooth between
// the zeros of psi_n, which all lie below sqrt(2n + 1).
double axis_tail(int n, double rho, int p) {
  const double upper = std::max(rho, effective_support(n));
  const double turning = std::sqrt(2.0 * n + 1.0);
  const double h = std::min(0.5, 2.0 / turning);
  if (p == 2) {
    return panel_integral([n](double x) { const double v = hermite_function(n, x); return 2.0 * v * v; }, rho,
                          upper, h);
  }
  std::vector<double> breaks = {rho};
  const double step = 0.25 * std::numbers::pi / turning;
  double x0 = rho, f0 = hermite_function(n, x0);
  while (x0 < turning + step) {
    const double x1 = x0 + step;
    const double f1 = hermite_function(n, x1);
    if (f0 == 0.0 && x0 > rho) breaks.push_back(x0);
    if (f0 * f1 < 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = hermite_function(n, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      breaks.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  breaks.push_back(upper);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    total += panel_integral([n](double x) { return 2.0 * std::abs(hermite_function(n, x)); }, breaks[j],
                            std::max(breaks[j], std::min(breaks[j + 1], upper)), h);
  }
  return total;
}

}  // namespace

double tail_mass(const HermiteIndex& i, std::span<const double> rho, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("tail_mass: p must be 1 or 2");
  if (rho.size() != i.dim()) throw std::invalid_argument("tail_mass: dimension mismatch");
  for (double v : rho) {
    if (!(v > 0.0)) throw std::invalid_argument("tail_mass: rho must be positive");
  }
  // Outside the box = complement of the product of the per-axis inside parts.
  double log_inside = 0.0;
  double total = 1.0;
  for (std::size_t s = 0; s < i.dim(); ++s) {
    const double tail = axis_tail(i[s], rho[s], p);
    double full = 1.0;
    if (p == 1) full = axis_tail(i[s], 1e-300, 1);
    total *= full;
    log_inside += std::log1p(-std::min(tail / full, 1.0));
  }
  const double outside = -std::expm1(log_inside);
  return p == 2 ? std::sqrt(std::max(0.0, outside)) : total * outside;
}

double tail_mass(const HermiteIndex& i, double rho, int p) {
  const std::vector<double> rhos(i.dim(), rho);
  return tail_mass(i, rhos, p);
}

double l4_norm_sq(const HermiteIndex& i) {
  // int psi_n^4 dx = 2^{-1/2} int psi_n(u/sqrt2)^4 du and psi_n(u/sqrt2)^4 is
  // e^{-u^2} times a polynomial of degree 4n: 2n+1 Gauss-Hermite nodes are exact.
  double prod = 1.0;
  for (int n : i.components()) {
    const QuadratureRule gh = gauss_hermite(2 * static_cast<std::size_t>(n) + 1);
    double sum = 0.0;
    for (std::size_t q = 0; q < gh.size(); ++q) {
      const double v = hermite_function(n, gh.nodes[q] / std::numbers::sqrt2);
      sum += gh.weights[q] * v * v * v * v;
    }
    prod *= sum / std::numbers::sqrt2;
  }
  return std::sqrt(prod);
}

std::vector<std::complex<double>> axis_fourier_integrals(int count, double r, double a, double k) {
  if (count < 0) throw std::invalid_argument("axis_fourier_integrals: negative count");
  if (!(r > 0.0) || !(a > 0.0)) throw std::invalid_argument("axis_fourier_integrals: r and a must be positive");
  std::vector<std::complex<double>> out(static_cast<std::size_t>(count));
  if (count == 0) return out;

  // Substituting x = r u: J_n = r^{1/2} int_{-A}^{A} psi_n(u) e^{-i w u} du with
  // A = a / r, w = k r. Parity folds this onto [0, A]:
  //   even n: 2 int_0^A psi_n cos(w u) du,  odd n: -2i int_0^A psi_n sin(w u) du.
  const double A = std::min(a / r, effective_support(count - 1));
  const double w = k * r;
  const double local_freq = std::abs(w) + std::sqrt(2.0 * count + 1.0);
  // About six radians of phase per 16-node panel keeps the rule at rounding level.
  const auto panels = static_cast<std::size_t>(std::ceil(A * local_freq / 6.0)) + 2;

  static const QuadratureRule rule = gauss_legendre(16);
  std::vector<double> cos_sum(out.size(), 0.0), sin_sum(out.size(), 0.0), values(out.size());
  const double width = A / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = width * (p + 0.5);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double u = mid + 0.5 * width * rule.nodes[q];
      const double wt = 0.5 * width * rule.weights[q];
      hermite_functions(u, values);
      const double c = wt * std::cos(w * u);
      const double s = wt * std::sin(w * u);
      for (std::size_t n = 0; n < values.size(); n += 2) cos_sum[n] += c * values[n];
      for (std::size_t n = 1; n < values.size(); n += 2) sin_sum[n] += s * values[n];
    }
  }
  const double scale = 2.0 * std::sqrt(r);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = n % 2 == 0 ? std::complex<double>(scale * cos_sum[n], 0.0)
                        : std::complex<double>(0.0, -scale * sin_sum[n]);
  }
  return out;
}

namespace {

void check_fourier_args(const TaperBasis& basis, std::span<const double> k, const Window& window) {
  if (k.size() != basis.dim()) throw std::invalid_argument("windowed_fourier_integral: frequency dimension mismatch");
  if (window.dim() != basis.dim()) throw std::invalid_argument("windowed_fourier_integral: window dimension mismatch");
}

}  // namespace

std::complex<double> windowed_fourier_integral(const TaperBasis& basis, const HermiteIndex& i,
                                               std::span<const double> k, const Window& window) {
  check_fourier_args(basis, k, window);
  if (!basis.contains(i)) throw std::invalid_argument("windowed_fourier_integral: index is not part of the basis");
  std::complex<double> value = 1.0;
  for (std::size_t s = 0; s < basis.dim(); ++s) {
    value *= axis_fourier_integrals(i[s] + 1, basis.r(), window.half_width(s), k[s]).back();
  }
  return value;
}

std::vector<std::complex<double>> windowed_fourier_integrals(const TaperBasis& basis,
                                                             std::span<const double> k,
                                                             const Window& window) {
  check_fourier_args(basis, k, window);
  std::vector<std::vector<std::complex<double>>> axes;
  axes.reserve(basis.dim());
  for (std::size_t s = 0; s < basis.dim(); ++s) {
    axes.push_back(axis_fourier_integrals(basis.i_max(), basis.r(), window.half_width(s), k[s]));
  }
  std::vector<std::complex<double>> out;
  out.reserve(basis.size());
  for (const auto& i : basis.indices()) {
    std::complex<double> value = 1.0;
    for (std::size_t s = 0; s < basis.dim(); ++s) value *= axes[s][static_cast<std::size_t>(i[s])];
    out.push_back(value);
  }
  return out;
}

}  // namespace mtsf
