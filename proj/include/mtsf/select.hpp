#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mtsf/pattern.hpp"
#include "mtsf/rng.hpp"

namespace mtsf {

/// Two frequencies expected to share the same structure factor value.
struct FrequencyPair {
  std::vector<double> k;
  std::vector<double> k_tilde;
};

struct FrequencyPairSet {
  std::vector<double> node;  ///< target frequency k0 (may be empty)
  std::vector<FrequencyPair> pairs;
};

/// Settings of the thinning-based cross-validation.
struct CvConfig {
  std::vector<int> candidates = default_candidates();
  int pilot_imax = 8;
  double theta = 1.0 / 3.0;
  double p = 0.5;
  /// Chord between neighbouring same-radius frequencies; 0 selects 0.02 for
  /// |k_node| <= 1 and 0.1 above.
  double pair_spacing = 0.0;
  std::vector<double> radial_offsets = {-0.2, -0.1, 0.0, 0.1, 0.2};
  RngSeed seed;

  /// i_max = 1, ..., 25.
  static std::vector<int> default_candidates();
};

/// The N pairs (q (cos t_j, sin t_j), q (sin t_j, cos t_j)), t_j = 2 pi j / N,
/// j = 1..N. q may be negative (reflected circle); q = 0 is rejected.
FrequencyPairSet circle_pairs(double q, int N);

/// Union of circle pairs over radii |k_node| + offsets. For the zero node the
/// zero offset is dropped and signed radii are kept; for other nodes radii
/// that vanish are dropped.
FrequencyPairSet build_pair_set(std::span<const double> k_node, const CvConfig& cfg);

struct AllowedDiagnostics {
  double c1 = 0.0;
  double c2 = 0.0;
  bool clustering_ok = false;
};

/// Separation constants of a pair set relative to |k0| = |pairs.node|, and
/// the spread condition checked with c3 = 10 for a in {0.1, 0.2, ..., 2} |k0|.
AllowedDiagnostics k0_allowed_diagnostics(const FrequencyPairSet& pairs);

/// Per-axis windowed Fourier integrals of every candidate basis and of the
/// pilot at every pair. They depend on the window, cfg and the pairs only, so
/// one table serves every pattern observed in the same window.
struct CvFourierTable {
  using Axes = std::vector<std::vector<std::complex<double>>>;  ///< [axis][degree]

  std::vector<double> half_widths;
  std::vector<int> candidates;
  int pilot_imax = 0;
  double theta = 0.0;
  std::vector<std::vector<Axes>> candidate;  ///< [candidate][pair], at k_j
  std::vector<Axes> pilot;                   ///< [pair], at k~_j
};

CvFourierTable cv_fourier_table(const Window& window, const CvConfig& cfg, const FrequencyPairSet& pairs);

/// R-hat(I) = (1/N) sum_j (S_I(k_j) - S_p(k~_j))^2 with a fresh p-thinning per
/// pair; S_I on the kept points, the pilot on the rest, both plug-in.
double cv_criterion(const PointPattern& pattern, int i_max, const CvConfig& cfg, const FrequencyPairSet& pairs);

/// R-hat for every candidate of cfg, sharing the thinnings across candidates.
std::vector<double> cv_criterion_curve(const PointPattern& pattern, const CvConfig& cfg,
                                       const FrequencyPairSet& pairs);
std::vector<double> cv_criterion_curve(const PointPattern& pattern, const CvConfig& cfg,
                                       const FrequencyPairSet& pairs, const CvFourierTable& table);

struct TaperSelection {
  int i_max = 0;
  std::map<int, double> criterion;
};

/// Candidate minimising R-hat; ties go to the smaller i_max.
TaperSelection select_tapers(const PointPattern& pattern, const CvConfig& cfg, const FrequencyPairSet& pairs);
TaperSelection select_tapers(const PointPattern& pattern, const CvConfig& cfg, const FrequencyPairSet& pairs,
                             const CvFourierTable& table);
TaperSelection select_tapers(const PointPattern& pattern, const CvConfig& cfg, std::span<const double> k_node);

/// Linear interpolation of selected i_max between the bracketing nodes
/// (|k|, i_max), rounded, at least 1, clamped outside the node range.
int interpolate_selection(const std::vector<std::pair<double, int>>& nodes, double k_norm);

namespace detail {

/// Per-pair estimates behind the criterion: candidate[c][j] = S_I(k_j) for
/// cfg.candidates[c], pilot[j] = S_p(k~_j).
struct CvEvaluation {
  std::vector<std::vector<double>> candidate;
  std::vector<double> pilot;
};

CvEvaluation cv_evaluate(const PointPattern& pattern, const CvConfig& cfg, const FrequencyPairSet& pairs,
                         const CvFourierTable& table);

}  // namespace detail

}  // namespace mtsf
