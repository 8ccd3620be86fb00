#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mtsf {

class Window;

/// Multi-index i = (i_1, ..., i_d) of a tensor-product Hermite function.
class HermiteIndex {
 public:
  HermiteIndex() = default;
  HermiteIndex(std::initializer_list<int> components);
  explicit HermiteIndex(std::vector<int> components);

  std::size_t dim() const { return components_.size(); }
  int operator[](std::size_t s) const { return components_[s]; }
  const std::vector<int>& components() const { return components_; }

  /// |i|_inf
  int max_component() const;
  /// |i|_1
  int total_order() const;

  auto operator<=>(const HermiteIndex&) const = default;

 private:
  std::vector<int> components_;
};

/// n-th L2-normalised Hermite function psi_n(y) = e^{-y^2/2} H_n(y), with H_n
/// the orthonormal Hermite polynomial. Evaluated by the normalised three-term
/// recurrence with running rescaling, so it stays finite for large n and |y|.
double hermite_function(int n, double y);

/// Fills out[n] = psi_n(y) for n = 0 .. out.size() - 1.
void hermite_functions(double y, std::span<double> out);

/// psi_i(x) = prod_l psi_{i_l}(x_l). Throws std::invalid_argument on a
/// dimension mismatch.
double psi(const HermiteIndex& i, std::span<const double> x);

/// Optional restriction of a taper family to indices of one parity
/// (psi_i(-x) = (-1)^{|i|_1} psi_i(x)).
enum class Parity { any, even, odd };

/// Scaled Hermite taper family f_i = r^{-d/2} psi_i(. / r) for the cube index
/// set {i : |i|_inf < i_max}, listed in lexicographic order.
class TaperBasis {
 public:
  /// Family whose dilation is fixed by `dilation_factor(R, i_max, theta)`.
  static TaperBasis hermite(std::size_t d, int i_max, double R, double theta = 1.0 / 3.0,
                            Parity parity = Parity::any);

  /// Family with an explicit dilation r.
  TaperBasis(std::size_t d, int i_max, double r, double R, double theta = 1.0 / 3.0,
             Parity parity = Parity::any);

  std::size_t dim() const { return d_; }
  int i_max() const { return i_max_; }
  double r() const { return r_; }
  double R() const { return R_; }
  double theta() const { return theta_; }
  Parity parity() const { return parity_; }
  const std::vector<HermiteIndex>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }

  bool contains(const HermiteIndex& i) const;

  /// Flat position of i in the full i_max^d lexicographic grid (ignores the
  /// parity restriction).
  std::size_t grid_position(const HermiteIndex& i) const;

 private:
  std::size_t d_;
  int i_max_;
  double r_;
  double R_;
  double theta_;
  Parity parity_;
  std::vector<HermiteIndex> indices_;
};

/// f_i(x) = r^{-d/2} psi_i(x / r). Throws std::invalid_argument when i is
/// not part of the basis.
double taper_value(const TaperBasis& basis, const HermiteIndex& i, std::span<const double> x);

/// r = R / sqrt(2 i_max + i_max^{1/3 + theta}); theta must lie in (0, 2/3).
double dilation_factor(double R, int i_max, double theta = 1.0 / 3.0);

/// Homogeneous Sobolev norm ||psi_i||^2_{H^{beta/2}} = int |F[psi_i](k)|^2 |k|^beta dk.
/// Exact for beta = 2; radial quadrature (d <= 3) otherwise.
double sobolev_norm_sq(const HermiteIndex& i, double beta);

/// ||psi_i 1_{R^d \ [-rho, rho]^d}||_p for p in {1, 2}.
double tail_mass(const HermiteIndex& i, double rho, int p);

/// Same with a per-axis box [-rho_1, rho_1] x ... x [-rho_d, rho_d].
double tail_mass(const HermiteIndex& i, std::span<const double> rho, int p);

/// ||psi_i||_4^2, exact through Gauss-Hermite quadrature.
double l4_norm_sq(const HermiteIndex& i);

/// One-dimensional factors int_{-a}^{a} r^{-1/2} psi_n(x / r) e^{-i k x} dx
/// for n = 0 .. count - 1.
std::vector<std::complex<double>> axis_fourier_integrals(int count, double r, double a, double k);

/// int_W f_i(x) e^{-i k.x} dx for a centered box window.
std::complex<double> windowed_fourier_integral(const TaperBasis& basis, const HermiteIndex& i,
                                               std::span<const double> k, const Window& window);

/// The same integral for every index of the basis, in basis order.
std::vector<std::complex<double>> windowed_fourier_integrals(const TaperBasis& basis,
                                                             std::span<const double> k,
                                                             const Window& window);

}  // namespace mtsf
