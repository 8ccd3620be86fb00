#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mtsf {

/// Centered observation box [-R_1, R_1] x ... x [-R_d, R_d].
class Window {
 public:
  explicit Window(std::vector<double> half_widths);

  /// The cube [-R, R]^d.
  static Window cube(std::size_t d, double R);

  std::size_t dim() const { return half_widths_.size(); }
  double half_width(std::size_t axis) const { return half_widths_[axis]; }
  const std::vector<double>& half_widths() const { return half_widths_; }
  double volume() const;
  bool contains(std::span<const double> x) const;

  bool operator==(const Window&) const = default;

 private:
  std::vector<double> half_widths_;
};

/// Finite configuration of points observed inside a window. Coordinates are
/// stored row-major, one point per row.
class PointPattern {
 public:
  explicit PointPattern(Window window);
  PointPattern(Window window, std::vector<double> coords);

  const Window& window() const { return window_; }
  std::size_t dim() const { return window_.dim(); }
  std::size_t size() const { return coords_.size() / window_.dim(); }
  bool empty() const { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }
  const std::vector<double>& coords() const { return coords_; }

  /// Appends a point; throws std::invalid_argument when it lies outside the
  /// window or has the wrong dimension.
  void push_back(std::span<const double> x);
  void reserve(std::size_t n) { coords_.reserve(n * dim()); }

  /// Empirical intensity #points / |W|.
  double empirical_intensity() const { return static_cast<double>(size()) / window_.volume(); }

  bool operator==(const PointPattern&) const = default;

 private:
  Window window_;
  std::vector<double> coords_;
};

/// Pattern file: a header line `# window R_1 ... R_d` followed by one point per
/// line as comma-separated coordinates, printed with round-trip precision.
void write_pattern(std::ostream& os, const PointPattern& pattern);
PointPattern read_pattern(std::istream& is);

void save_pattern(const std::string& path, const PointPattern& pattern);
PointPattern load_pattern(const std::string& path);

}  // namespace mtsf
