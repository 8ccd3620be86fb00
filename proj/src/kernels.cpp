#include "mtsf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtsf::kernel {

AxisTables hermite_tables(const PointPattern& pattern, double r, int i_max) {
  if (!(r > 0.0) || i_max < 1) throw std::invalid_argument("hermite_tables: need r > 0 and i_max >= 1");
  const std::size_t d = pattern.dim();
  const auto n = static_cast<Eigen::Index>(pattern.size());
  AxisTables tables;
  tables.r = r;
  tables.i_max = i_max;
  tables.axes.assign(d, Eigen::MatrixXd(n, i_max));
  const double scale = 1.0 / std::sqrt(r);
  const double* coords = pattern.coords().data();

#pragma omp parallel if (n > static_cast<Eigen::Index>(kBlockSize))
  {
    std::vector<double> values(static_cast<std::size_t>(i_max));
#pragma omp for schedule(static)
    for (Eigen::Index p = 0; p < n; ++p) {
      for (std::size_t s = 0; s < d; ++s) {
        hermite_functions(coords[static_cast<std::size_t>(p) * d + s] / r, values);
        for (int j = 0; j < i_max; ++j) tables.axes[s](p, j) = scale * values[static_cast<std::size_t>(j)];
      }
    }
  }
  return tables;
}

namespace {

struct Block {
  Eigen::MatrixXd re;
  Eigen::MatrixXd im;
};

std::size_t row_of(std::span<const std::size_t> rows, std::size_t b) { return rows.empty() ? b : rows[b]; }

// Planar case: [Re T | -Im T] = Hx^T [cos * Hy | sin * Hy] in one product.
Block planar_block(const AxisTables& tables, const Phases& phase, std::span<const std::size_t> rows,
                   std::size_t begin, std::size_t end) {
  const auto m = static_cast<Eigen::Index>(tables.i_max);
  const auto nb = static_cast<Eigen::Index>(end - begin);
  Eigen::MatrixXd hx(nb, m), y(nb, 2 * m);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const std::size_t idx = begin + static_cast<std::size_t>(b);
    const auto row = static_cast<Eigen::Index>(row_of(rows, idx));
    hx.row(b) = tables.axes[0].row(row);
    y.row(b).head(m) = phase.cos[idx] * tables.axes[1].row(row);
    y.row(b).tail(m) = phase.sin[idx] * tables.axes[1].row(row);
  }
  Eigen::MatrixXd prod(m, 2 * m);
  prod.noalias() = hx.transpose() * y;
  return {prod.leftCols(m), -prod.rightCols(m)};
}

// Any dimension: explicit tensor products per point.
Block generic_block(const AxisTables& tables, const Phases& phase, std::span<const std::size_t> rows,
                    std::size_t begin, std::size_t end) {
  const std::size_t d = tables.axes.size();
  const auto m = static_cast<std::size_t>(tables.i_max);
  std::size_t total = 1;
  for (std::size_t s = 0; s < d; ++s) total *= m;
  Block out;
  out.re = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), 1);
  out.im = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), 1);
  std::vector<double> prod(total), next(total);
  for (std::size_t b = begin; b < end; ++b) {
    const auto p = static_cast<Eigen::Index>(row_of(rows, b));
    std::size_t len = 1;
    prod[0] = 1.0;
    for (std::size_t s = 0; s < d; ++s) {
      for (std::size_t a = 0; a < len; ++a) {
        for (std::size_t j = 0; j < m; ++j) next[a * m + j] = prod[a] * tables.axes[s](p, static_cast<Eigen::Index>(j));
      }
      len *= m;
      std::swap(prod, next);
    }
    const double c = phase.cos[b];
    const double sn = phase.sin[b];
    for (std::size_t t = 0; t < total; ++t) {
      out.re(static_cast<Eigen::Index>(t), 0) += c * prod[t];
      out.im(static_cast<Eigen::Index>(t), 0) -= sn * prod[t];
    }
  }
  return out;
}

}  // namespace

Phases phases(const PointPattern& pattern, std::span<const double> k, std::span<const std::size_t> rows) {
  const std::size_t d = pattern.dim();
  if (k.size() != d) throw std::invalid_argument("phases: frequency dimension mismatch");
  const std::size_t count = rows.empty() ? pattern.size() : rows.size();
  Phases out;
  out.cos.resize(count);
  out.sin.resize(count);
  for (std::size_t b = 0; b < count; ++b) {
    const auto x = pattern.point(row_of(rows, b));
    double phase = 0.0;
    for (std::size_t s = 0; s < d; ++s) phase += k[s] * x[s];
    out.cos[b] = std::cos(phase);
    out.sin[b] = std::sin(phase);
  }
  return out;
}

std::vector<std::complex<double>> grid_statistics(const AxisTables& tables, const Phases& phase,
                                                  std::span<const std::size_t> rows) {
  const std::size_t d = tables.axes.size();
  const std::size_t count = rows.empty() ? tables.points() : rows.size();
  if (phase.cos.size() != count || phase.sin.size() != count) {
    throw std::invalid_argument("grid_statistics: phases do not match the rows");
  }
  for (std::size_t r : rows) {
    if (r >= tables.points()) throw std::out_of_range("grid_statistics: row out of range");
  }
  const auto m = static_cast<std::size_t>(tables.i_max);
  std::size_t total = 1;
  for (std::size_t s = 0; s < d; ++s) total *= m;

  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  std::vector<Block> partial(blocks);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * kBlockSize;
    const std::size_t end = std::min(count, begin + kBlockSize);
    partial[b] = d == 2 ? planar_block(tables, phase, rows, begin, end) : generic_block(tables, phase, rows, begin, end);
  }

  std::vector<std::complex<double>> out(total, {0.0, 0.0});
  if (blocks == 0) return out;
  Eigen::MatrixXd re = partial[0].re;
  Eigen::MatrixXd im = partial[0].im;
  for (std::size_t b = 1; b < blocks; ++b) {
    re += partial[b].re;
    im += partial[b].im;
  }
  if (d == 2) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t j = 0; j < m; ++j) {
        const auto ia = static_cast<Eigen::Index>(a), ij = static_cast<Eigen::Index>(j);
        out[a * m + j] = {re(ia, ij), im(ia, ij)};
      }
    }
  } else {
    for (std::size_t t = 0; t < total; ++t) out[t] = {re(static_cast<Eigen::Index>(t), 0), im(static_cast<Eigen::Index>(t), 0)};
  }
  return out;
}

std::vector<std::complex<double>> grid_statistics(const PointPattern& pattern, const AxisTables& tables,
                                                  std::span<const double> k, std::span<const std::size_t> rows) {
  if (k.size() != pattern.dim()) throw std::invalid_argument("grid_statistics: frequency dimension mismatch");
  if (tables.axes.size() != pattern.dim() || tables.points() != pattern.size()) {
    throw std::invalid_argument("grid_statistics: tables do not match the pattern");
  }
  return grid_statistics(tables, phases(pattern, k, rows), rows);
}

}  // namespace mtsf::kernel

namespace mtsf::reference {

std::vector<std::complex<double>> linear_statistics(const PointPattern& pattern, const TaperBasis& basis,
                                                    std::span<const double> k) {
  if (k.size() != basis.dim() || pattern.dim() != basis.dim()) {
    throw std::invalid_argument("linear_statistics: dimension mismatch");
  }
  std::vector<std::complex<double>> out;
  out.reserve(basis.size());
  for (const auto& i : basis.indices()) {
    std::complex<double> sum = 0.0;
    for (std::size_t p = 0; p < pattern.size(); ++p) {
      const auto x = pattern.point(p);
      double phase = 0.0;
      for (std::size_t s = 0; s < x.size(); ++s) phase += k[s] * x[s];
      sum += taper_value(basis, i, x) * std::complex<double>(std::cos(phase), -std::sin(phase));
    }
    out.push_back(sum);
  }
  return out;
}

}  // namespace mtsf::reference
