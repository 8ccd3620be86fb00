#include "mtsf/pattern.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mtsf {

Window::Window(std::vector<double> half_widths) : half_widths_(std::move(half_widths)) {
  if (half_widths_.empty()) throw std::invalid_argument("Window: dimension must be at least 1");
  for (double h : half_widths_) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("Window: half-widths must be positive and finite");
  }
}

Window Window::cube(std::size_t d, double R) { return Window(std::vector<double>(d, R)); }

double Window::volume() const {
  double v = 1.0;
  for (double h : half_widths_) v *= 2.0 * h;
  return v;
}

bool Window::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (!(std::abs(x[s]) <= half_widths_[s])) return false;
  }
  return true;
}

PointPattern::PointPattern(Window window) : window_(std::move(window)) {}

PointPattern::PointPattern(Window window, std::vector<double> coords)
    : window_(std::move(window)), coords_(std::move(coords)) {
  if (coords_.size() % window_.dim() != 0) {
    throw std::invalid_argument("PointPattern: coordinate count is not a multiple of the dimension");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (!window_.contains(point(i))) throw std::invalid_argument("PointPattern: point outside the window");
  }
}

void PointPattern::push_back(std::span<const double> x) {
  if (x.size() != dim()) throw std::invalid_argument("PointPattern: dimension mismatch");
  if (!window_.contains(x)) throw std::invalid_argument("PointPattern: point outside the window");
  coords_.insert(coords_.end(), x.begin(), x.end());
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view token, std::size_t line_no) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) token.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::runtime_error("pattern file line " + std::to_string(line_no) + ": cannot parse '" +
                             std::string(token) + "'");
  }
  return value;
}

}  // namespace

void write_pattern(std::ostream& os, const PointPattern& pattern) {
  os << "# window";
  for (double h : pattern.window().half_widths()) os << ' ' << format_double(h);
  os << '\n';
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto x = pattern.point(i);
    for (std::size_t s = 0; s < x.size(); ++s) {
      if (s) os << ',';
      os << format_double(x[s]);
    }
    os << '\n';
  }
}

PointPattern read_pattern(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  std::istringstream header(line);
  std::string hash, keyword;
  header >> hash >> keyword;
  if (hash != "#" || keyword != "window") {
    throw std::runtime_error("pattern file: expected header '# window R_1 ... R_d'");
  }
  std::vector<double> half_widths;
  std::string token;
  while (header >> token) half_widths.push_back(parse_double(token, line_no));
  PointPattern pattern{Window(std::move(half_widths))};

  std::vector<double> x(pattern.dim());
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string_view rest(line);
    std::size_t s = 0;
    for (; s < x.size(); ++s) {
      const auto comma = rest.find(',');
      const bool last = s + 1 == x.size();
      if (last != (comma == std::string_view::npos)) {
        throw std::runtime_error("pattern file line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(x.size()) + " coordinates");
      }
      x[s] = parse_double(rest.substr(0, comma), line_no);
      if (!last) rest.remove_prefix(comma + 1);
    }
    if (!pattern.window().contains(x)) {
      throw std::runtime_error("pattern file line " + std::to_string(line_no) + ": point outside the window");
    }
    pattern.push_back(x);
  }
  return pattern;
}

void save_pattern(const std::string& path, const PointPattern& pattern) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_pattern(os, pattern);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

PointPattern load_pattern(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_pattern(is);
}

}  // namespace mtsf
