#include "mtsf/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mtsf/hermite.hpp"

namespace mtsf {

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadratureRule gauss_hermite(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_hermite: n must be positive");
  // Golub-Welsch for the nodes, then Newton polishing on psi_n.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (std::size_t j = 1; j < n; ++j) sub[static_cast<Eigen::Index>(j - 1)] = std::sqrt(j / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<double> values(n + 1);
  const int order = static_cast<int>(n);
  for (std::size_t j = 0; j < n; ++j) {
    double x = solver.eigenvalues()[static_cast<Eigen::Index>(j)];
    for (int iter = 0; iter < 3; ++iter) {
      hermite_functions(x, values);
      // psi_n' = sqrt(2n) psi_{n-1} - x psi_n
      const double deriv = std::sqrt(2.0 * order) * values[n - 1] - x * values[n];
      if (deriv == 0.0) break;
      const double dx = values[n] / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    hermite_functions(x, values);
    rule.nodes[j] = x;
    rule.weights[j] = 1.0 / (order * values[n - 1] * values[n - 1]);
  }
  return rule;
}

double integrate_panels(const std::function<double(double)>& f, double a,
                        double b, std::size_t panels,
                        const QuadratureRule& rule) {
  if (panels == 0) panels = 1;
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    const double mid = lo + 0.5 * width;
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
    total += 0.5 * width * s;
  }
  return total;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          unsigned max_depth) {
  if (a == b) return 0.0;
  // One Gauss-Kronrod step per interval; bisection is driven here so that
  // negligible pieces stop at the absolute floor.
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &error);
  if (error <= abs_tol || error <= rel_tol * std::abs(value) || max_depth == 0) return value;
  const double mid = 0.5 * (a + b);
  return integrate_adaptive(f, a, mid, 0.5 * abs_tol, rel_tol, max_depth - 1) +
         integrate_adaptive(f, mid, b, 0.5 * abs_tol, rel_tol, max_depth - 1);
}

}  // namespace mtsf
