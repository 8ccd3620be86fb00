#include "mtsf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "mtsf/config.hpp"
#include "mtsf/estimator.hpp"
#include "mtsf/experiment.hpp"
#include "mtsf/models.hpp"
#include "mtsf/pattern.hpp"
#include "mtsf/select.hpp"
#include "mtsf/simulate.hpp"

namespace mtsf::cli {

namespace {

const char* const kModelParams[] = {"intensity", "alpha", "sigma2", "mu", "radius", "rho", "sigma"};

struct ModelFlags {
  std::string name;
  std::map<std::string, std::string> values;

  void add(CLI::App* app) {
    app->add_option("--model", name, "poisson, thomas, matern, lgcp, ginibre, bessel, lattice or arcsin_cox")
        ->required();
    for (const char* p : kModelParams) {
      app->add_option(std::string("--") + p, values[p], std::string("model parameter ") + p);
    }
  }

  ModelSpec build(const CLI::App* app) const {
    std::vector<std::pair<std::string, std::string>> params;
    for (const char* p : kModelParams) {
      if (app->count(std::string("--") + p)) params.emplace_back(p, values.at(p));
    }
    return make_model(name, params, "model");
  }
};

struct Sink {
  std::ofstream file;
  std::ostream* stream;

  Sink(const std::string& path, std::ostream& fallback) : stream(&fallback) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
      stream = &file;
    }
  }
  std::ostream& operator*() { return *stream; }
};

std::vector<double> frequency_grid(double kmax, int knum) {
  if (!(kmax >= 0.0)) throw ConfigError("kmax", "must be non-negative");
  if (knum < 1) throw ConfigError("knum", "must be at least 1");
  std::vector<double> norms;
  for (int j = 0; j < knum; ++j) norms.push_back(knum == 1 ? kmax : kmax * j / (knum - 1));
  return norms;
}

std::vector<double> direction_for(const std::string& text, std::size_t dim) {
  std::vector<double> dir;
  if (text.empty()) {
    if (dim != 2) throw ConfigError("direction", "required outside d = 2");
    dir = ExperimentConfig::default_direction();
  } else {
    dir = parse_number_list(text, "direction");
  }
  if (dir.size() != dim) throw ConfigError("direction", "dimension must match the pattern");
  double n = 0.0;
  for (double v : dir) n += v * v;
  n = std::sqrt(n);
  if (!(n > 0.0)) throw ConfigError("direction", "must be non-zero");
  for (double& v : dir) v /= n;
  return dir;
}

std::vector<double> scaled(const std::vector<double>& dir, double norm) {
  std::vector<double> k(dir);
  for (double& v : k) v *= norm;
  return k;
}

Window window_from(const std::string& text, int dim) {
  auto widths = parse_number_list(text, "window");
  if (widths.size() == 1) widths.assign(static_cast<std::size_t>(dim), widths.front());
  for (double w : widths) {
    if (!(w > 0.0)) throw ConfigError("window", "half-widths must be positive");
  }
  return Window(widths);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermite multitaper structure-factor estimation"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a model and write a pattern file");
  ModelFlags sim_model;
  sim_model.add(sim);
  std::string sim_window = "10", sim_output;
  int sim_dim = 2;
  SimulationOptions sim_opts;
  sim->add_option("--window", sim_window, "half-width R, or R_1,...,R_d")->capture_default_str();
  sim->add_option("--dim", sim_dim, "dimension when --window is a single value")->capture_default_str();
  sim->add_option("--grid-spacing", sim_opts.grid_spacing, "Gaussian field grid spacing (0 = auto)");
  sim->add_option("--guard-scale", sim_opts.guard_scale, "multiplier of the edge guard")->capture_default_str();
  sim->add_option("--seed", seed)->capture_default_str();
  sim->add_option("-o,--output", sim_output, "pattern file (default: standard output)");

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate S along a direction from a pattern file");
  std::string est_input, est_direction, est_intensity = "plugin", est_output;
  double est_kmax = 5.0, est_theta = 1.0 / 3.0;
  int est_knum = 51, est_imax = 8;
  est->add_option("input", est_input, "pattern file")->required();
  est->add_option("--kmax", est_kmax)->capture_default_str();
  est->add_option("--knum", est_knum)->capture_default_str();
  est->add_option("--direction", est_direction, "x,y (default cos 2pi/3, sin 2pi/3)");
  est->add_option("--imax", est_imax)->capture_default_str();
  est->add_option("--theta", est_theta);
  est->add_option("--intensity", est_intensity, "plugin or a known intensity value")->capture_default_str();
  est->add_option("--seed", seed, "accepted for uniformity; the estimate is deterministic");
  est->add_option("-o,--output", est_output);

  // select
  auto* sel = app.add_subcommand("select", "cross-validated taper count at frequency nodes");
  std::string sel_input, sel_nodes = "0,0.25,0.5,0.75,1,1.5,2,2.5,3,3.5,4,4.5", sel_candidates, sel_direction,
                         sel_output;
  int sel_pilot = 0;
  double sel_theta = 1.0 / 3.0, sel_spacing = 0.0, sel_p = 0.5;
  sel->add_option("input", sel_input, "pattern file")->required();
  sel->add_option("--nodes", sel_nodes, "node norms")->capture_default_str();
  sel->add_option("--candidates", sel_candidates, "candidate i_max values (default 1..25)");
  sel->add_option("--pilot", sel_pilot, "pilot i_max: 8 for clustered, 2 for repulsive patterns")->required();
  sel->add_option("--theta", sel_theta);
  sel->add_option("--p", sel_p, "thinning retention probability")->capture_default_str();
  sel->add_option("--pairs-spacing", sel_spacing, "chord between same-radius frequencies (0 = auto)");
  sel->add_option("--direction", sel_direction, "x,y (default cos 2pi/3, sin 2pi/3)");
  sel->add_option("--seed", seed)->capture_default_str();
  sel->add_option("-o,--output", sel_output);

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a configured simulation campaign");
  std::string exp_config, exp_output;
  bool full_scale = false;
  int exp_threads = 0;
  exp->add_option("config", exp_config, "configuration file")->required();
  exp->add_option("--seed", seed, "overrides experiment.seed");
  exp->add_flag("--full-scale", full_scale, "window [-20,20]^2 and 500 replicates");
  exp->add_option("--threads", exp_threads, "worker count (default MTSF_NUM_THREADS or all cores)");
  exp->add_option("-o,--output", exp_output, "overrides experiment.output");

  // theory
  auto* th = app.add_subcommand("theory", "tabulate the theoretical structure factor");
  ModelFlags th_model;
  th_model.add(th);
  double th_kmax = 5.0;
  int th_knum = 51;
  std::string th_direction, th_output;
  th->add_option("--kmax", th_kmax)->capture_default_str();
  th->add_option("--knum", th_knum)->capture_default_str();
  th->add_option("--direction", th_direction, "x,y (default cos 2pi/3, sin 2pi/3)");
  th->add_option("--seed", seed, "accepted for uniformity");
  th->add_option("-o,--output", th_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*sim) {
      const ModelSpec model = sim_model.build(sim);
      const Window window = window_from(sim_window, sim_dim);
      const PointPattern pattern = simulate(model, window, RngSeed(seed), sim_opts);
      Sink sink(sim_output, out);
      write_pattern(*sink, pattern);
    } else if (*est) {
      const PointPattern pattern = load_pattern(est_input);
      const auto dir = direction_for(est_direction, pattern.dim());
      const auto norms = frequency_grid(est_kmax, est_knum);
      const auto& widths = pattern.window().half_widths();
      const double R = *std::min_element(widths.begin(), widths.end());
      const TaperBasis basis = TaperBasis::hermite(pattern.dim(), est_imax, R, est_theta);
      std::optional<double> lambda;
      if (est_intensity != "plugin") {
        lambda = parse_number(est_intensity, "intensity");
        if (!(*lambda > 0.0)) throw ConfigError("intensity", "must be positive or plugin");
      }
      Sink sink(est_output, out);
      *sink << "k_norm,estimate,taper_count\n";
      for (double kn : norms) {
        const auto k = scaled(dir, kn);
        const auto s = lambda ? multitaper_oracle(pattern, basis, k, *lambda) : multitaper_plugin(pattern, basis, k);
        *sink << format_number(kn) << ',' << format_number(s.value) << ',' << s.taper_count << "\n";
      }
    } else if (*sel) {
      const PointPattern pattern = load_pattern(sel_input);
      if (pattern.dim() != 2) throw ConfigError("input", "selection needs a planar pattern");
      const auto dir = direction_for(sel_direction, 2);
      CvConfig cfg;
      if (!sel_candidates.empty()) {
        cfg.candidates.clear();
        for (double v : parse_number_list(sel_candidates, "candidates")) {
          if (v != std::floor(v) || v < 1) throw ConfigError("candidates", "must be integers >= 1");
          cfg.candidates.push_back(static_cast<int>(v));
        }
      }
      if (sel_pilot < 1) throw ConfigError("pilot", "must be at least 1");
      cfg.pilot_imax = sel_pilot;
      cfg.theta = sel_theta;
      cfg.p = sel_p;
      cfg.pair_spacing = sel_spacing;
      const auto nodes = parse_number_list(sel_nodes, "nodes");
      nlohmann::ordered_json result = nlohmann::ordered_json::array();
      for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (!(nodes[n] >= 0.0)) throw ConfigError("nodes", "must be non-negative");
        cfg.seed = RngSeed(seed).child({stream::cv, n});
        const auto choice = select_tapers(pattern, cfg, scaled(dir, nodes[n]));
        nlohmann::ordered_json curve = nlohmann::ordered_json::object();
        for (const auto& [imax, value] : choice.criterion) curve[std::to_string(imax)] = value;
        result.push_back({{"node_norm", nodes[n]}, {"selected_imax", choice.i_max}, {"criterion_curve", curve}});
      }
      Sink sink(sel_output, out);
      *sink << result.dump(2) << "\n";
    } else if (*exp) {
      std::ifstream in(exp_config);
      if (!in) throw std::runtime_error("cannot read '" + exp_config + "'");
      std::stringstream text;
      text << in.rdbuf();
      ExperimentConfig cfg = parse_config(text.str());
      if (exp->count("--seed")) cfg.seed = seed;
      if (full_scale) {
        cfg.half_widths.assign(cfg.half_widths.size(), 20.0);
        cfg.replicates = 500;
      }
      if (!exp_output.empty()) cfg.output = exp_output;
      const auto result = run_experiment(cfg, exp_threads);
      Sink sink(cfg.output, out);
      write_csv(*sink, result);
    } else if (*th) {
      const ModelSpec model = th_model.build(th);
      const auto dir = direction_for(th_direction, 2);
      Sink sink(th_output, out);
      *sink << "model,k_norm,S\n";
      for (double kn : frequency_grid(th_kmax, th_knum)) {
        *sink << model_name(model) << ',' << format_number(kn) << ','
              << format_number(structure_factor(model, scaled(dir, kn))) << "\n";
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mtsf::cli
