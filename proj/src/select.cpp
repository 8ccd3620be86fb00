#include "mtsf/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mtsf/estimator.hpp"
#include "mtsf/hermite.hpp"
#include "mtsf/kernels.hpp"
#include "mtsf/simulate.hpp"

namespace mtsf {

std::vector<int> CvConfig::default_candidates() {
  std::vector<int> c(25);
  for (int i = 0; i < 25; ++i) c[static_cast<std::size_t>(i)] = i + 1;
  return c;
}

namespace {

double norm(std::span<const double> k) {
  double s = 0.0;
  for (double v : k) s += v * v;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double sum_norm(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] + b[i]) * (a[i] + b[i]);
  return std::sqrt(s);
}

void validate(const CvConfig& cfg) {
  if (cfg.candidates.empty()) throw std::invalid_argument("CvConfig: candidates must not be empty");
  for (int c : cfg.candidates) {
    if (c < 1) throw std::invalid_argument("CvConfig: candidates must be at least 1");
  }
  if (cfg.pilot_imax < 1) throw std::invalid_argument("CvConfig: pilot_imax must be at least 1");
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw std::invalid_argument("CvConfig: p must lie in (0, 1)");
  if (!(cfg.theta > 0.0 && cfg.theta < 2.0 / 3.0)) throw std::invalid_argument("CvConfig: theta must lie in (0, 2/3)");
  if (cfg.pair_spacing < 0.0) throw std::invalid_argument("CvConfig: pair_spacing must be non-negative");
}

// Angular count giving neighbouring frequencies a chord of `spacing`.
int angular_count(double q, double spacing) {
  const double radius = std::abs(q);
  if (spacing >= 2.0 * radius) return 1;
  const double n = std::numbers::pi / std::asin(spacing / (2.0 * radius));
  return std::max(1, static_cast<int>(std::lround(n)));
}

double min_half_width(const Window& window) {
  const auto& w = window.half_widths();
  return *std::min_element(w.begin(), w.end());
}

CvFourierTable::Axes axis_integrals(const TaperBasis& basis, const Window& window, std::span<const double> k) {
  CvFourierTable::Axes axes;
  for (std::size_t s = 0; s < basis.dim(); ++s) {
    axes.push_back(axis_fourier_integrals(basis.i_max(), basis.r(), window.half_width(s), k[s]));
  }
  return axes;
}

// Plug-in multitaper value over a subset of the points, with the windowed
// integrals given per axis: F_i = prod_s F_s[i_s].
double subset_estimate(const kernel::AxisTables& tables, const kernel::Phases& phase,
                       std::span<const std::size_t> rows, const CvFourierTable::Axes& axes, double volume) {
  if (rows.empty()) return 0.0;
  const double lambda = static_cast<double>(rows.size()) / volume;
  const auto T = kernel::grid_statistics(tables, phase, rows);
  const std::size_t d = axes.size();
  const auto m = static_cast<std::size_t>(tables.i_max);
  std::vector<std::size_t> idx(d, 0);
  double sum = 0.0;
  for (const auto& t : T) {
    std::complex<double> f = 1.0;
    for (std::size_t s = 0; s < d; ++s) f *= axes[s][idx[s]];
    sum += std::norm(t - lambda * f);
    for (std::size_t s = d; s-- > 0;) {
      if (++idx[s] < m) break;
      idx[s] = 0;
    }
  }
  return sum / (lambda * static_cast<double>(T.size()));
}

}  // namespace

FrequencyPairSet circle_pairs(double q, int N) {
  if (q == 0.0 || !std::isfinite(q)) throw std::invalid_argument("circle_pairs: q must be non-zero");
  if (N < 1) throw std::invalid_argument("circle_pairs: N must be at least 1");
  FrequencyPairSet set;
  set.pairs.reserve(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j) {
    const double t = 2.0 * std::numbers::pi * j / N;
    const double c = std::cos(t), s = std::sin(t);
    set.pairs.push_back({{q * c, q * s}, {q * s, q * c}});
  }
  return set;
}

FrequencyPairSet build_pair_set(std::span<const double> k_node, const CvConfig& cfg) {
  if (k_node.size() != 2) throw std::invalid_argument("build_pair_set: the circle construction needs d = 2");
  const double node = norm(k_node);
  const double spacing = cfg.pair_spacing > 0.0 ? cfg.pair_spacing : (node <= 1.0 ? 0.02 : 0.1);
  FrequencyPairSet set;
  set.node.assign(k_node.begin(), k_node.end());
  for (double offset : cfg.radial_offsets) {
    const double q = node + offset;
    if (node == 0.0 ? offset == 0.0 : q <= 0.0) continue;
    auto ring = circle_pairs(q, angular_count(q, spacing));
    set.pairs.insert(set.pairs.end(), ring.pairs.begin(), ring.pairs.end());
  }
  if (set.pairs.empty()) throw std::invalid_argument("build_pair_set: no admissible radius");
  return set;
}

AllowedDiagnostics k0_allowed_diagnostics(const FrequencyPairSet& set) {
  const double k0 = norm(set.node);
  if (!(k0 > 0.0)) throw std::invalid_argument("k0_allowed_diagnostics: k0 must be non-zero");
  if (set.pairs.empty()) throw std::invalid_argument("k0_allowed_diagnostics: empty pair set");
  AllowedDiagnostics out;
  out.c1 = out.c2 = std::numeric_limits<double>::infinity();
  for (const auto& pr : set.pairs) {
    out.c1 = std::min(out.c1, std::min(norm(pr.k), norm(pr.k_tilde)) / k0);
    out.c2 = std::min(out.c2, std::min(distance(pr.k, pr.k_tilde), sum_norm(pr.k, pr.k_tilde)) / k0);
  }

  constexpr double c3 = 10.0;
  const std::size_t N = set.pairs.size();
  const double dim_power = static_cast<double>(set.node.size()) - 1.0;
  out.clustering_ok = true;
  for (int step = 1; step <= 20 && out.clustering_ok; ++step) {
    const double a = 0.1 * step * k0;
    const double bound = c3 * (static_cast<double>(N) * std::pow(a / k0, dim_power) + 1.0);
    for (std::size_t j = 0; j < N && out.clustering_ok; ++j) {
      const auto& pj = set.pairs[j];
      std::size_t count = 0;
      for (const auto& pk : set.pairs) {
        count += distance(pj.k, pk.k) <= a;
        count += distance(pj.k_tilde, pk.k) <= a;
        count += distance(pj.k, pk.k_tilde) <= a;
        count += distance(pj.k_tilde, pk.k_tilde) <= a;
      }
      if (static_cast<double>(count) > bound) out.clustering_ok = false;
    }
  }
  return out;
}

CvFourierTable cv_fourier_table(const Window& window, const CvConfig& cfg, const FrequencyPairSet& pairs) {
  validate(cfg);
  for (const auto& pr : pairs.pairs) {
    if (pr.k.size() != window.dim() || pr.k_tilde.size() != window.dim()) {
      throw std::invalid_argument("cv_fourier_table: frequency dimension mismatch");
    }
  }
  const double R = min_half_width(window);
  CvFourierTable table;
  table.half_widths = window.half_widths();
  table.candidates = cfg.candidates;
  table.pilot_imax = cfg.pilot_imax;
  table.theta = cfg.theta;
  const std::size_t N = pairs.pairs.size();
  table.candidate.assign(cfg.candidates.size(), std::vector<CvFourierTable::Axes>(N));
  table.pilot.resize(N);
  std::vector<TaperBasis> bases;
  for (int c : cfg.candidates) bases.push_back(TaperBasis::hermite(window.dim(), c, R, cfg.theta));
  const TaperBasis pilot = TaperBasis::hermite(window.dim(), cfg.pilot_imax, R, cfg.theta);

#pragma omp parallel for schedule(dynamic) if (N > 1)
  for (std::size_t j = 0; j < N; ++j) {
    table.pilot[j] = axis_integrals(pilot, window, pairs.pairs[j].k_tilde);
    for (std::size_t c = 0; c < bases.size(); ++c) {
      table.candidate[c][j] = axis_integrals(bases[c], window, pairs.pairs[j].k);
    }
  }
  return table;
}

namespace detail {

CvEvaluation cv_evaluate(const PointPattern& pattern, const CvConfig& cfg, const FrequencyPairSet& pairs,
                         const CvFourierTable& table) {
  validate(cfg);
  if (pattern.empty()) throw std::invalid_argument("cv_criterion: the pattern has no points");
  if (pairs.pairs.empty()) throw std::invalid_argument("cv_criterion: empty pair set");
  for (const auto& pr : pairs.pairs) {
    if (pr.k.size() != pattern.dim() || pr.k_tilde.size() != pattern.dim()) {
      throw std::invalid_argument("cv_criterion: frequency dimension mismatch");
    }
  }
  if (table.half_widths != pattern.window().half_widths() || table.candidates != cfg.candidates ||
      table.pilot_imax != cfg.pilot_imax || table.theta != cfg.theta || table.pilot.size() != pairs.pairs.size()) {
    throw std::invalid_argument("cv_criterion: Fourier table built for another setting");
  }
  const double R = min_half_width(pattern.window());
  const double volume = pattern.window().volume();

  std::vector<kernel::AxisTables> tables;
  for (int c : cfg.candidates) tables.push_back(kernel::hermite_tables(pattern, dilation_factor(R, c, cfg.theta), c));
  const auto pilot_tables =
      kernel::hermite_tables(pattern, dilation_factor(R, cfg.pilot_imax, cfg.theta), cfg.pilot_imax);

  const std::size_t N = pairs.pairs.size();
  CvEvaluation out;
  out.candidate.assign(cfg.candidates.size(), std::vector<double>(N, 0.0));
  out.pilot.assign(N, 0.0);

#pragma omp parallel for schedule(dynamic) if (N > 1)
  for (std::size_t j = 0; j < N; ++j) {
    const auto keep = thinning_mask(pattern.size(), cfg.p, cfg.seed.child({stream::thinning, j}));
    std::vector<std::size_t> kept, rest;
    for (std::size_t i = 0; i < keep.size(); ++i) (keep[i] ? kept : rest).push_back(i);
    const auto& pr = pairs.pairs[j];
    const auto rest_phase = kernel::phases(pattern, pr.k_tilde, rest);
    out.pilot[j] = subset_estimate(pilot_tables, rest_phase, rest, table.pilot[j], volume);
    const auto kept_phase = kernel::phases(pattern, pr.k, kept);
    for (std::size_t c = 0; c < tables.size(); ++c) {
      out.candidate[c][j] = subset_estimate(tables[c], kept_phase, kept, table.candidate[c][j], volume);
    }
  }
  return out;
}

CvEvaluation cv_evaluate(const PointPattern& pattern, const CvConfig& cfg, const FrequencyPairSet& pairs) {
  validate(cfg);
  return cv_evaluate(pattern, cfg, pairs, cv_fourier_table(pattern.window(), cfg, pairs));
}

}  // namespace detail

namespace {

std::vector<double> criterion_curve(const detail::CvEvaluation& eval) {
  std::vector<double> curve;
  curve.reserve(eval.candidate.size());
  for (const auto& est : eval.candidate) {
    double sum = 0.0;
    for (std::size_t j = 0; j < est.size(); ++j) {
      const double diff = est[j] - eval.pilot[j];
      sum += diff * diff;
    }
    curve.push_back(sum / static_cast<double>(est.size()));
  }
  return curve;
}

TaperSelection argmin(const std::vector<double>& curve, const std::vector<int>& candidates) {
  TaperSelection out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < curve.size(); ++c) {
    const int cand = candidates[c];
    out.criterion[cand] = curve[c];
    if (curve[c] < best || (curve[c] == best && cand < out.i_max)) {
      best = curve[c];
      out.i_max = cand;
    }
  }
  return out;
}

}  // namespace

std::vector<double> cv_criterion_curve(const PointPattern& pattern, const CvConfig& cfg,
                                       const FrequencyPairSet& pairs) {
  return criterion_curve(detail::cv_evaluate(pattern, cfg, pairs));
}

std::vector<double> cv_criterion_curve(const PointPattern& pattern, const CvConfig& cfg,
                                       const FrequencyPairSet& pairs, const CvFourierTable& table) {
  return criterion_curve(detail::cv_evaluate(pattern, cfg, pairs, table));
}

double cv_criterion(const PointPattern& pattern, int i_max, const CvConfig& cfg, const FrequencyPairSet& pairs) {
  CvConfig single = cfg;
  single.candidates = {i_max};
  return cv_criterion_curve(pattern, single, pairs).front();
}

TaperSelection select_tapers(const PointPattern& pattern, const CvConfig& cfg, const FrequencyPairSet& pairs) {
  return argmin(cv_criterion_curve(pattern, cfg, pairs), cfg.candidates);
}

TaperSelection select_tapers(const PointPattern& pattern, const CvConfig& cfg, const FrequencyPairSet& pairs,
                             const CvFourierTable& table) {
  return argmin(cv_criterion_curve(pattern, cfg, pairs, table), cfg.candidates);
}

TaperSelection select_tapers(const PointPattern& pattern, const CvConfig& cfg, std::span<const double> k_node) {
  return select_tapers(pattern, cfg, build_pair_set(k_node, cfg));
}

int interpolate_selection(const std::vector<std::pair<double, int>>& nodes, double k_norm) {
  if (nodes.empty()) throw std::invalid_argument("interpolate_selection: no nodes");
  if (k_norm <= nodes.front().first) return std::max(1, nodes.front().second);
  if (k_norm >= nodes.back().first) return std::max(1, nodes.back().second);
  for (std::size_t n = 1; n < nodes.size(); ++n) {
    const auto& [k1, v1] = nodes[n];
    const auto& [k0, v0] = nodes[n - 1];
    if (k_norm <= k1) {
      if (k1 == k0) return std::max(1, v1);
      const double t = (k_norm - k0) / (k1 - k0);
      return std::max(1, static_cast<int>(std::lround(v0 + t * (v1 - v0))));
    }
  }
  return std::max(1, nodes.back().second);
}

}  // namespace mtsf
