#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mtsf {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t n);

/// n-point Gauss-Hermite rule in "function form": the weights already carry
/// the factor e^{x_j^2}, so that
///
///   int_R g(x) dx ~= sum_j w_j g(x_j)
///
/// is exact whenever g(x) = e^{-x^2} p(x) with deg p <= 2n - 1. This is the
/// natural form for products of Hermite functions and it avoids overflowing
/// e^{x^2} at the outer nodes.
QuadratureRule gauss_hermite(std::size_t n);

/// Integral of f over [a, b] split into `panels` equal panels, each handled
/// by `rule` (a rule on [-1, 1]).
double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, std::size_t panels,
                        const QuadratureRule& rule);

/// Adaptive Gauss-Kronrod (15 points) on [a, b]. Refinement stops once the
/// estimated error is below max(abs_tol, rel_tol * |I|).
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol = 1e-13,
                          unsigned max_depth = 20);

}  // namespace mtsf
