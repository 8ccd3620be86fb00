#include "mtsf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace mtsf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

int parse_int(const std::string& text, const std::string& field) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "expected an integer, got '" + text + "'");
  return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
  return value;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& field) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) out.push_back(parse_int(item, field));
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += format_number(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

// Model validation messages start with "model.<param> ..."; keep the key as
// the field path.
[[noreturn]] void rethrow_model_error(const std::invalid_argument& e, const std::string& prefix) {
  std::string msg = e.what();
  std::string field = prefix;
  if (msg.rfind("model.", 0) == 0) {
    const auto space = msg.find(' ');
    field = prefix + msg.substr(5, space - 5);
    msg = msg.substr(space + 1);
  }
  throw ConfigError(field, msg);
}

using Section = std::vector<std::pair<std::string, std::string>>;

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_number(const std::string& text, const std::string& field) {
  double value = 0.0;
  const std::string t = trim(text);
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end || t.empty()) throw ConfigError(field, "expected a number, got '" + text + "'");
  if (!std::isfinite(value)) throw ConfigError(field, "must be finite");
  return value;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number(item, field));
  if (out.empty()) throw ConfigError(field, "expected at least one value");
  return out;
}

std::vector<double> ExperimentConfig::default_direction() {
  const double t = 2.0 * std::numbers::pi / 3.0;
  return {std::cos(t), std::sin(t)};
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.model == b.model && a.half_widths == b.half_widths && a.replicates == b.replicates && a.seed == b.seed &&
         a.output == b.output && a.direction == b.direction && a.norms == b.norms && a.taper_mode == b.taper_mode &&
         a.imax == b.imax && a.theta == b.theta && a.intensity == b.intensity && a.cv == b.cv &&
         a.simulation.grid_spacing == b.simulation.grid_spacing &&
         a.simulation.guard_scale == b.simulation.guard_scale;
}

std::vector<std::string> model_parameters(const std::string& name) {
  if (name == "poisson") return {"intensity"};
  if (name == "thomas") return {"alpha", "sigma2", "mu"};
  if (name == "matern") return {"alpha", "radius", "mu"};
  if (name == "lgcp") return {"mu", "sigma2", "alpha"};
  if (name == "bessel") return {"rho", "alpha"};
  if (name == "arcsin_cox") return {"sigma", "rho"};
  if (name == "ginibre" || name == "lattice") return {};
  throw ConfigError("", "unknown model '" + name + "'");
}

ModelSpec make_model(const std::string& name, const Section& params, const std::string& field_prefix) {
  std::vector<std::string> allowed;
  try {
    allowed = model_parameters(name);
  } catch (const ConfigError& e) {
    throw ConfigError(field_prefix + ".name", e.what());
  }
  std::map<std::string, double> values;
  for (const auto& [key, text] : params) {
    const std::string field = field_prefix + "." + key;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(field, "not a parameter of model '" + name + "'");
    }
    values[key] = parse_number(text, field);
  }
  auto get = [&](const char* key, double fallback) {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  };

  ModelSpec model;
  if (name == "poisson") {
    model = model::Poisson{get("intensity", 1.0)};
  } else if (name == "thomas") {
    model = model::Thomas{get("alpha", 5.0), get("sigma2", 0.25), get("mu", 0.2)};
  } else if (name == "matern") {
    model = model::Matern{get("alpha", 5.0), get("radius", 1.5), get("mu", 0.2)};
  } else if (name == "lgcp") {
    model = model::ExpLgcp{get("mu", 0.0), get("sigma2", 0.5), get("alpha", 1.0)};
  } else if (name == "ginibre") {
    model = model::Ginibre{};
  } else if (name == "bessel") {
    model = model::BesselDpp{get("rho", 0.3), get("alpha", 1.0)};
  } else if (name == "lattice") {
    model = model::PerturbedLattice{};
  } else {
    model = model::ArcsinCox{get("sigma", 0.5), get("rho", 1.0)};
  }
  try {
    mtsf::validate(model);
  } catch (const std::invalid_argument& e) {
    rethrow_model_error(e, field_prefix);
  }
  return model;
}

void validate(const ExperimentConfig& c) {
  try {
    mtsf::validate(c.model);
  } catch (const std::invalid_argument& e) {
    rethrow_model_error(e, "model");
  }
  if (std::holds_alternative<model::BesselDpp>(c.model)) {
    throw ConfigError("model.name", "the Bessel process has no simulator; use the theory command");
  }
  if (c.half_widths.empty()) throw ConfigError("window.half_width", "expected at least one value");
  for (double h : c.half_widths) {
    if (!(h > 0.0)) throw ConfigError("window.half_width", "must be positive");
  }
  const bool planar_only = !std::holds_alternative<model::Poisson>(c.model);
  if (planar_only && c.half_widths.size() != 2) throw ConfigError("window.half_width", "this model needs d = 2");
  if (c.replicates < 1) throw ConfigError("experiment.replicates", "must be at least 1");

  if (c.direction.size() != c.half_widths.size()) {
    throw ConfigError("frequencies.direction", "dimension must match the window");
  }
  double dn = 0.0;
  for (double v : c.direction) dn += v * v;
  if (std::abs(std::sqrt(dn) - 1.0) > 1e-9) throw ConfigError("frequencies.direction", "must be a unit vector");
  if (c.norms.empty()) throw ConfigError("frequencies.norms", "expected at least one value");
  for (double k : c.norms) {
    if (!(k >= 0.0)) throw ConfigError("frequencies.norms", "must be non-negative");
  }

  if (c.taper_mode == TaperMode::fixed && c.imax < 1) throw ConfigError("estimator.imax", "must be at least 1");
  if (!(c.theta > 0.0 && c.theta < 2.0 / 3.0)) throw ConfigError("estimator.theta", "must lie in (0, 2/3)");

  if (c.taper_mode == TaperMode::cv) {
    if (c.half_widths.size() != 2) throw ConfigError("estimator.imax", "cross-validation needs d = 2");
    if (c.cv.pilot_imax < 1) throw ConfigError("cv.pilot", "required (8 for clustered, 2 for repulsive models)");
    if (c.cv.nodes.empty()) throw ConfigError("cv.nodes", "expected at least one value");
    if (!std::is_sorted(c.cv.nodes.begin(), c.cv.nodes.end())) throw ConfigError("cv.nodes", "must be sorted");
    for (double n : c.cv.nodes) {
      if (!(n >= 0.0)) throw ConfigError("cv.nodes", "must be non-negative");
    }
    for (int k : c.cv.candidates) {
      if (k < 1) throw ConfigError("cv.candidates", "must be at least 1");
    }
    if (!(c.cv.p > 0.0 && c.cv.p < 1.0)) throw ConfigError("cv.p", "must lie in (0, 1)");
    if (c.cv.pair_spacing < 0.0) throw ConfigError("cv.pair_spacing", "must be non-negative");
    if (c.cv.radial_offsets.empty()) throw ConfigError("cv.radial_offsets", "expected at least one value");
  }
  if (c.simulation.grid_spacing < 0.0) throw ConfigError("simulation.grid_spacing", "must be non-negative");
  if (!(c.simulation.guard_scale > 0.0)) throw ConfigError("simulation.guard_scale", "must be positive");
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", "line " + std::to_string(line_no) + ": malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> known = {"experiment", "model",     "window",    "frequencies",
                                                  "estimator",  "cv",        "simulation"};
      if (!known.count(current)) throw ConfigError(current, "unknown section");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", "line " + std::to_string(line_no) + ": expected key = value");
    if (current.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": key outside a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string field = current + "." + key;
    if (!seen.insert(field).second) throw ConfigError(field, "given twice");
    sections[current].emplace_back(key, value);
  }

  ExperimentConfig c;
  auto take = [&](const std::string& section, const std::set<std::string>& keys) {
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : sections[section]) {
      if (!keys.count(key)) throw ConfigError(section + "." + key, "unknown key");
      out[key] = value;
    }
    return out;
  };

  {
    auto s = take("experiment", {"replicates", "seed", "output"});
    if (s.count("replicates")) c.replicates = parse_int(s["replicates"], "experiment.replicates");
    if (s.count("seed")) c.seed = parse_u64(s["seed"], "experiment.seed");
    if (s.count("output")) c.output = s["output"];
  }
  {
    Section params;
    std::string name;
    for (const auto& [key, value] : sections["model"]) {
      if (key == "name") {
        name = value;
      } else {
        params.emplace_back(key, value);
      }
    }
    if (name.empty()) throw ConfigError("model.name", "required");
    c.model = make_model(name, params);
  }
  {
    auto s = take("window", {"half_width"});
    if (s.count("half_width")) {
      c.half_widths = parse_number_list(s["half_width"], "window.half_width");
      if (c.half_widths.size() == 1) c.half_widths.push_back(c.half_widths.front());
    }
  }
  {
    auto s = take("frequencies", {"direction", "norms", "k_max", "k_num"});
    if (s.count("direction")) c.direction = parse_number_list(s["direction"], "frequencies.direction");
    if (s.count("norms") && (s.count("k_max") || s.count("k_num"))) {
      throw ConfigError("frequencies.norms", "give either norms or k_max and k_num");
    }
    if (s.count("norms")) c.norms = parse_number_list(s["norms"], "frequencies.norms");
    if (s.count("k_max") || s.count("k_num")) {
      if (!s.count("k_max") || !s.count("k_num")) throw ConfigError("frequencies.k_num", "k_max and k_num go together");
      const double kmax = parse_number(s["k_max"], "frequencies.k_max");
      const int knum = parse_int(s["k_num"], "frequencies.k_num");
      if (knum < 1) throw ConfigError("frequencies.k_num", "must be at least 1");
      if (!(kmax >= 0.0)) throw ConfigError("frequencies.k_max", "must be non-negative");
      c.norms.clear();
      for (int j = 0; j < knum; ++j) c.norms.push_back(knum == 1 ? kmax : kmax * j / (knum - 1));
    }
  }
  {
    auto s = take("estimator", {"imax", "theta", "intensity"});
    if (s.count("imax")) {
      if (s["imax"] == "cv") {
        c.taper_mode = TaperMode::cv;
      } else {
        c.imax = parse_int(s["imax"], "estimator.imax");
      }
    }
    if (s.count("theta")) c.theta = parse_number(s["theta"], "estimator.theta");
    if (s.count("intensity")) {
      if (s["intensity"] == "plugin") {
        c.intensity = IntensityMode::plugin;
      } else if (s["intensity"] == "oracle") {
        c.intensity = IntensityMode::oracle;
      } else {
        throw ConfigError("estimator.intensity", "expected plugin or oracle");
      }
    }
  }
  {
    auto s = take("cv", {"nodes", "candidates", "pilot", "p", "pair_spacing", "radial_offsets"});
    if (s.count("nodes")) c.cv.nodes = parse_number_list(s["nodes"], "cv.nodes");
    if (s.count("candidates")) c.cv.candidates = parse_int_list(s["candidates"], "cv.candidates");
    if (s.count("pilot")) c.cv.pilot_imax = parse_int(s["pilot"], "cv.pilot");
    if (s.count("p")) c.cv.p = parse_number(s["p"], "cv.p");
    if (s.count("pair_spacing")) c.cv.pair_spacing = parse_number(s["pair_spacing"], "cv.pair_spacing");
    if (s.count("radial_offsets")) c.cv.radial_offsets = parse_number_list(s["radial_offsets"], "cv.radial_offsets");
  }
  {
    auto s = take("simulation", {"grid_spacing", "guard_scale"});
    if (s.count("grid_spacing")) c.simulation.grid_spacing = parse_number(s["grid_spacing"], "simulation.grid_spacing");
    if (s.count("guard_scale")) c.simulation.guard_scale = parse_number(s["guard_scale"], "simulation.guard_scale");
  }
  validate(c);
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "replicates = " << c.replicates << "\n";
  out << "seed = " << c.seed << "\n";
  if (!c.output.empty()) out << "output = " << c.output << "\n";

  out << "\n[model]\n";
  out << "name = " << model_name(c.model) << "\n";
  std::visit(overloaded{
                 [&](const model::Poisson& m) { out << "intensity = " << format_number(m.intensity) << "\n"; },
                 [&](const model::Thomas& m) {
                   out << "alpha = " << format_number(m.alpha) << "\nsigma2 = " << format_number(m.sigma2)
                       << "\nmu = " << format_number(m.mu) << "\n";
                 },
                 [&](const model::Matern& m) {
                   out << "alpha = " << format_number(m.alpha) << "\nradius = " << format_number(m.radius)
                       << "\nmu = " << format_number(m.mu) << "\n";
                 },
                 [&](const model::ExpLgcp& m) {
                   out << "mu = " << format_number(m.mu) << "\nsigma2 = " << format_number(m.sigma2)
                       << "\nalpha = " << format_number(m.alpha) << "\n";
                 },
                 [&](const model::Ginibre&) {},
                 [&](const model::BesselDpp& m) {
                   out << "rho = " << format_number(m.rho) << "\nalpha = " << format_number(m.alpha) << "\n";
                 },
                 [&](const model::PerturbedLattice&) {},
                 [&](const model::ArcsinCox& m) {
                   out << "sigma = " << format_number(m.sigma) << "\nrho = " << format_number(m.rho) << "\n";
                 },
             },
             c.model);

  out << "\n[window]\nhalf_width = " << join(c.half_widths) << "\n";
  out << "\n[frequencies]\ndirection = " << join(c.direction) << "\nnorms = " << join(c.norms) << "\n";

  out << "\n[estimator]\n";
  out << "imax = " << (c.taper_mode == TaperMode::cv ? std::string("cv") : std::to_string(c.imax)) << "\n";
  out << "theta = " << format_number(c.theta) << "\n";
  out << "intensity = " << (c.intensity == IntensityMode::plugin ? "plugin" : "oracle") << "\n";

  out << "\n[cv]\n";
  out << "nodes = " << join(c.cv.nodes) << "\n";
  if (!c.cv.candidates.empty()) out << "candidates = " << join(c.cv.candidates) << "\n";
  if (c.cv.pilot_imax > 0) out << "pilot = " << c.cv.pilot_imax << "\n";
  out << "p = " << format_number(c.cv.p) << "\n";
  out << "pair_spacing = " << format_number(c.cv.pair_spacing) << "\n";
  out << "radial_offsets = " << join(c.cv.radial_offsets) << "\n";

  out << "\n[simulation]\n";
  out << "grid_spacing = " << format_number(c.simulation.grid_spacing) << "\n";
  out << "guard_scale = " << format_number(c.simulation.guard_scale) << "\n";
  return out.str();
}

}  // namespace mtsf
