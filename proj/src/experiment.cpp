#include "mtsf/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mtsf/kernels.hpp"
#include "mtsf/select.hpp"
#include "mtsf/simulate.hpp"

namespace mtsf {

namespace {

std::vector<double> scaled(const std::vector<double>& direction, double norm) {
  std::vector<double> k(direction);
  for (double& v : k) v *= norm;
  return k;
}

struct Replicate {
  std::vector<double> estimates;
  std::vector<int> selected;
};

CvConfig cv_config(const ExperimentConfig& c) {
  CvConfig cv;
  if (!c.cv.candidates.empty()) cv.candidates = c.cv.candidates;
  cv.pilot_imax = c.cv.pilot_imax;
  cv.theta = c.theta;
  cv.p = c.cv.p;
  cv.pair_spacing = c.cv.pair_spacing;
  cv.radial_offsets = c.cv.radial_offsets;
  return cv;
}

// Pair sets and Fourier tables per node; shared by all replicates.
struct CvPlan {
  CvConfig cfg;
  std::vector<FrequencyPairSet> pairs;
  std::vector<CvFourierTable> tables;
};

Replicate run_replicate(const ExperimentConfig& c, const Window& window, const CvPlan& plan, std::size_t r) {
  const RngSeed base = RngSeed(c.seed).child({stream::replicate, r});
  const PointPattern pattern = simulate(c.model, window, base.child(stream::simulate), c.simulation);
  const double R = *std::min_element(c.half_widths.begin(), c.half_widths.end());
  const std::size_t d = c.half_widths.size();
  Replicate out;

  std::vector<int> imax(c.norms.size(), c.imax);
  if (c.taper_mode == TaperMode::cv) {
    CvConfig cv = plan.cfg;
    std::vector<std::pair<double, int>> nodes;
    for (std::size_t n = 0; n < c.cv.nodes.size(); ++n) {
      int choice = cv.pilot_imax;
      if (!pattern.empty()) {
        cv.seed = base.child({stream::cv, n});
        choice = select_tapers(pattern, cv, plan.pairs[n], plan.tables[n]).i_max;
      }
      out.selected.push_back(choice);
      nodes.emplace_back(c.cv.nodes[n], choice);
    }
    for (std::size_t f = 0; f < c.norms.size(); ++f) imax[f] = interpolate_selection(nodes, c.norms[f]);
  }

  const double lambda =
      c.intensity == IntensityMode::oracle ? intensity(c.model) : static_cast<double>(pattern.size()) / window.volume();
  std::map<int, std::pair<TaperBasis, kernel::AxisTables>> cache;
  for (std::size_t f = 0; f < c.norms.size(); ++f) {
    const int m = imax[f];
    auto it = cache.find(m);
    if (it == cache.end()) {
      TaperBasis basis = TaperBasis::hermite(d, m, R, c.theta);
      auto tables = kernel::hermite_tables(pattern, basis.r(), m);
      it = cache.emplace(m, std::make_pair(std::move(basis), std::move(tables))).first;
    }
    const auto& [basis, tables] = it->second;
    const auto k = scaled(c.direction, c.norms[f]);
    if (lambda == 0.0) {
      out.estimates.push_back(0.0);
      continue;
    }
    const auto T = kernel::grid_statistics(pattern, tables, k);
    const auto F = windowed_fourier_integrals(basis, k, window);
    out.estimates.push_back(multitaper_value(T, F, lambda));
  }
  return out;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: no values");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

int default_workers() {
  if (const char* env = std::getenv("MTSF_NUM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
  validate(config);
  if (workers < 1) workers = default_workers();
  const Window window(config.half_widths);
  const auto reps = static_cast<std::size_t>(config.replicates);

  CvPlan plan;
  if (config.taper_mode == TaperMode::cv) {
    plan.cfg = cv_config(config);
    for (double node : config.cv.nodes) {
      plan.pairs.push_back(build_pair_set(scaled(config.direction, node), plan.cfg));
      plan.tables.push_back(cv_fourier_table(window, plan.cfg, plan.pairs.back()));
    }
  }

  std::vector<Replicate> results(reps);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::size_t r = 0; r < reps; ++r) {
    try {
      results[r] = run_replicate(config, window, plan, r);
    } catch (...) {
#pragma omp critical(mtsf_experiment_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult out;
  out.model = model_name(config.model);
  const std::string mode = config.taper_mode == TaperMode::cv ? "cv" : "fixed:" + std::to_string(config.imax);
  for (std::size_t f = 0; f < config.norms.size(); ++f) {
    std::vector<double> values(reps);
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      values[r] = results[r].estimates[f];
      sum += values[r];
    }
    ExperimentRecord rec;
    rec.k_norm = config.norms[f];
    rec.mean = sum / static_cast<double>(reps);
    rec.q05 = quantile(values, 0.05);
    rec.q95 = quantile(values, 0.95);
    rec.theory = structure_factor(config.model, scaled(config.direction, config.norms[f]));
    rec.replicates = config.replicates;
    rec.taper_mode = mode;
    out.records.push_back(rec);
    out.estimates.push_back(std::move(values));
  }
  if (config.taper_mode == TaperMode::cv) {
    for (auto& r : results) out.selected.push_back(std::move(r.selected));
  }
  return out;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << kExperimentCsvHeader << "\n";
  for (const auto& r : result.records) {
    out << result.model << ',' << format_number(r.k_norm) << ',' << format_number(r.mean) << ','
        << format_number(r.q05) << ',' << format_number(r.q95) << ',' << format_number(r.theory) << ','
        << r.replicates << ',' << r.taper_mode << "\n";
  }
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  write_csv(out, result);
  return out.str();
}

}  // namespace mtsf
