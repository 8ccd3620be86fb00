#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mtsf/config.hpp"

namespace mtsf {

struct ExperimentRecord {
  double k_norm = 0.0;
  double mean = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double theory = 0.0;
  int replicates = 0;
  std::string taper_mode;  ///< "fixed:<imax>" or "cv"
};

struct ExperimentResult {
  std::string model;
  std::vector<ExperimentRecord> records;
  /// estimates[f][r]: replicate r at config.norms[f].
  std::vector<std::vector<double>> estimates;
  /// selected[r][n]: CV choice of replicate r at config.cv.nodes[n]; empty for
  /// fixed tapers.
  std::vector<std::vector<int>> selected;
};

/// Column header of the campaign CSV.
inline constexpr const char* kExperimentCsvHeader = "model,k_norm,mean,q05,q95,theory,replicates,taper_mode";

/// Simulates, estimates and aggregates. Replicate r draws from the stream
/// (seed, replicate, r); results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 0);

void write_csv(std::ostream& out, const ExperimentResult& result);
std::string to_csv(const ExperimentResult& result);

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7).
double quantile(std::vector<double> values, double q);

/// Worker count from MTSF_NUM_THREADS, else the OpenMP default.
int default_workers();

}  // namespace mtsf
