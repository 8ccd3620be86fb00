#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "mtsf/rng.hpp"

namespace mtsf {

enum class FieldMethod {
  circulant,  ///< circulant embedding on a periodic torus, O(M log M) per draw
  cholesky,   ///< dense Cholesky of the grid covariance; reference for small grids
};

/// Draws a centered stationary Gaussian field with isotropic covariance
/// c(|x|) on the regular grid {h_s * j_s}, j in [0, n_1) x ... x [0, n_d).
/// The embedding / factorisation is computed once; draws are const and may
/// run concurrently.
class GaussianFieldSampler {
 public:
  GaussianFieldSampler(std::function<double(double)> covariance, std::vector<std::size_t> shape,
                       std::vector<double> spacing, FieldMethod method = FieldMethod::circulant);
  GaussianFieldSampler(std::function<double(double)> covariance, std::vector<std::size_t> shape, double h,
                       FieldMethod method = FieldMethod::circulant);
  ~GaussianFieldSampler();
  GaussianFieldSampler(GaussianFieldSampler&&) noexcept;
  GaussianFieldSampler& operator=(GaussianFieldSampler&&) noexcept;

  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<double>& spacing() const { return h_; }
  std::size_t size() const;
  FieldMethod method() const { return method_; }

  /// Torus extent per axis (circulant method only).
  const std::vector<std::size_t>& torus_shape() const { return torus_; }

  /// Mass of negative embedding eigenvalues that had to be clipped, relative
  /// to the total; 0 when the embedding is exact.
  double clipped_fraction() const { return clipped_fraction_; }

  /// Row-major values (last axis fastest).
  std::vector<double> sample(Philox& rng) const;

 private:
  struct Fft;

  std::vector<std::size_t> shape_;
  std::vector<double> h_;
  FieldMethod method_;
  std::vector<std::size_t> torus_;
  std::vector<double> sqrt_eigen_;
  std::vector<double> cholesky_;
  double clipped_fraction_ = 0.0;
  std::unique_ptr<Fft> fft_;
};

}  // namespace mtsf
