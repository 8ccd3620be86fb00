#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtsf/estimator.hpp"
#include "mtsf/models.hpp"
#include "mtsf/simulate.hpp"

namespace mtsf {

/// Invalid or unreadable configuration. field() is the dotted key path
/// ("experiment.replicates"), empty for syntax errors not tied to a key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class TaperMode { fixed, cv };

struct CvSettings {
  std::vector<double> nodes = {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5};
  std::vector<int> candidates;  ///< empty selects 1..25
  int pilot_imax = 0;           ///< required when the taper mode is cv
  double p = 0.5;
  double pair_spacing = 0.0;
  std::vector<double> radial_offsets = {-0.2, -0.1, 0.0, 0.1, 0.2};

  bool operator==(const CvSettings&) const = default;
};

/// One simulation-and-estimation campaign. Frequencies are norms along a
/// unit direction.
struct ExperimentConfig {
  ModelSpec model = model::Poisson{};
  std::vector<double> half_widths = {10.0, 10.0};
  int replicates = 100;
  std::uint64_t seed = 1;
  std::string output;  ///< empty writes to standard output

  std::vector<double> direction = default_direction();
  std::vector<double> norms = {1.0, 2.0, 3.0};

  TaperMode taper_mode = TaperMode::fixed;
  int imax = 8;
  double theta = 1.0 / 3.0;
  IntensityMode intensity = IntensityMode::plugin;

  CvSettings cv;
  SimulationOptions simulation;

  /// (cos 2pi/3, sin 2pi/3).
  static std::vector<double> default_direction();
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses the INI-style format: `[section]` headers, `key = value` lines,
/// `#` or `;` comments, comma-separated lists. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);

/// Writes every field back in the same format; parse_config inverts it.
std::string serialize_config(const ExperimentConfig& config);

/// Throws ConfigError naming the first invalid field.
void validate(const ExperimentConfig& config);

/// Parses a model given by name and string-valued parameters (the [model]
/// section or CLI flags). Missing parameters take the Table-1 values.
ModelSpec make_model(const std::string& name, const std::vector<std::pair<std::string, std::string>>& params,
                     const std::string& field_prefix = "model");

/// Parameter names accepted by a model ("alpha", "sigma2", ...).
std::vector<std::string> model_parameters(const std::string& name);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// Strict parsers used for config values and CLI flags; throw ConfigError
/// with the given field.
double parse_number(const std::string& text, const std::string& field);
std::vector<double> parse_number_list(const std::string& text, const std::string& field);

}  // namespace mtsf
