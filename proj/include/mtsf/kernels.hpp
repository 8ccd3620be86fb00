#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mtsf/hermite.hpp"
#include "mtsf/pattern.hpp"

namespace mtsf::kernel {

/// Per-axis scaled Hermite values r^{-1/2} psi_n(x_s / r): one matrix per
/// axis, one row per point, one column per degree n < i_max.
struct AxisTables {
  double r = 1.0;
  int i_max = 0;
  std::vector<Eigen::MatrixXd> axes;

  std::size_t points() const { return axes.empty() ? 0 : static_cast<std::size_t>(axes.front().rows()); }
};

AxisTables hermite_tables(const PointPattern& pattern, double r, int i_max);

/// Points per accumulation block. Partial sums are formed per block and added
/// in block order, so results do not depend on the number of threads.
inline constexpr std::size_t kBlockSize = 256;

/// T_i(k) = sum_x e^{-i k.x} f_i(x) for every i of the full i_max^d grid in
/// lexicographic order. `rows` selects a subset of the pattern's points (all
/// points when empty). Uses OpenMP over point blocks unless already inside a
/// parallel region.
std::vector<std::complex<double>> grid_statistics(const PointPattern& pattern, const AxisTables& tables,
                                                  std::span<const double> k,
                                                  std::span<const std::size_t> rows = {});

/// cos(k.x) and sin(k.x) for the selected rows, in row order.
struct Phases {
  std::vector<double> cos;
  std::vector<double> sin;
};

Phases phases(const PointPattern& pattern, std::span<const double> k, std::span<const std::size_t> rows = {});

/// Same as above with the phase factors supplied, so several tables can share
/// them.
std::vector<std::complex<double>> grid_statistics(const AxisTables& tables, const Phases& phase,
                                                  std::span<const std::size_t> rows = {});

}  // namespace mtsf::kernel

namespace mtsf::reference {

/// Direct serial evaluation of T_i(k) = sum_x e^{-i k.x} f_i(x) for every
/// index of the basis, point by point and taper by taper. Kept as the ground
/// truth for the blocked kernel.
std::vector<std::complex<double>> linear_statistics(const PointPattern& pattern, const TaperBasis& basis,
                                                    std::span<const double> k);

}  // namespace mtsf::reference
