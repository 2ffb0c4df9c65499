#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "phasemap/error.hpp"
#include "phasemap/orchestrator.hpp"
#include "phasemap/solvers.hpp"

namespace phasemap {

using nlohmann::json;

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::clock: return "clock";
    case Experiment::j1j2: return "j1j2";
    case Experiment::mbl: return "mbl";
    case Experiment::tfim_nnn: return "tfim-nnn";
    case Experiment::dimer: return "dimer";
    case Experiment::synthetic: return "synthetic";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view tag) {
  for (Experiment e : {Experiment::clock, Experiment::j1j2, Experiment::mbl, Experiment::tfim_nnn, Experiment::dimer,
                       Experiment::synthetic})
    if (tag == to_string(e)) return e;
  throw ArgumentError("unknown experiment '" + std::string(tag) + "'");
}

namespace {

template <class T>
void require_nonempty(const std::vector<T>& v, const char* name) {
  if (v.empty()) throw ArgumentError(std::string("config: ") + name + " must not be empty");
}

void require_finite(const std::vector<double>& v, const char* name) {
  for (double x : v)
    if (!std::isfinite(x)) throw ArgumentError(std::string("config: ") + name + " has a non-finite entry");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

/// The default grid with `extra` merged in, sorted.
std::vector<double> default_grid_with(double extra) {
  std::vector<double> g = default_epsilon_grid();
  g.push_back(extra);
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.n_sites < 2) throw ArgumentError("config: n_sites must be at least 2");
  if (c.n_samples < 2) throw ArgumentError("config: n_samples must be at least 2");
  if (c.n_realizations < 1) throw ArgumentError("config: n_realizations must be at least 1");
  if (c.n_repeats < 1) throw ArgumentError("config: n_repeats must be at least 1");
  if (c.workers < 1) throw ArgumentError("config: workers must be at least 1");
  require_nonempty(c.epsilons, "epsilon");
  for (double e : c.epsilons)
    if (!(e > 0.0) || !std::isfinite(e)) throw ArgumentError("config: every epsilon must be positive and finite");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ArgumentError("config: delta must lie in (0, 1)");
  if (!(c.quench_time >= 0.0) || !std::isfinite(c.quench_time))
    throw ArgumentError("config: quench_time must be finite and nonnegative");
  if (c.analyses.pca_kmeans && (c.kmeans_k < 1 || c.pca_components < 1))
    throw ArgumentError("config: kmeans_k and pca_components must be positive");

  switch (c.experiment) {
    case Experiment::clock:
      require_nonempty(c.f_grid, "f_grid");
      require_nonempty(c.theta_grid, "theta_grid");
      require_finite(c.f_grid, "f_grid");
      require_finite(c.theta_grid, "theta_grid");
      break;
    case Experiment::j1j2:
      require_nonempty(c.j2_list, "j2_list");
      require_nonempty(c.g_list, "g_list");
      require_finite(c.j2_list, "j2_list");
      require_finite(c.g_list, "g_list");
      break;
    case Experiment::mbl:
      require_nonempty(c.h_list, "h_list");
      require_finite(c.h_list, "h_list");
      break;
    case Experiment::tfim_nnn:
      require_nonempty(c.delta_j_list, "delta_j_list");
      require_finite(c.delta_j_list, "delta_j_list");
      break;
    case Experiment::dimer:
      require_nonempty(c.dimer_variants, "dimer_variants");
      if (c.n_sites % 2 != 0) throw ArgumentError("config: dimer experiment needs an even n_sites");
      break;
    case Experiment::synthetic:
      require_nonempty(c.blob_counts, "blob_counts");
      for (std::size_t b : c.blob_counts)
        if (b < 1) throw ArgumentError("config: blob_counts entries must be positive");
      if (!(c.flip_probability >= 0.0 && c.flip_probability <= 1.0))
        throw ArgumentError("config: flip_probability must lie in [0, 1]");
      break;
  }
}

std::optional<std::vector<double>> epsilon_grid_preset(std::string_view name) {
  if (name == "default") return default_epsilon_grid();
  if (auto e = epsilon_preset(name)) return std::vector<double>{*e};
  return std::nullopt;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2a", "fig2b", "fig3", "fig4", "supp-fig2", "supp-fig3", "supp-fig4"};
  return names;
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.preset = std::string(name);
  c.delta = kDefaultDelta;
  c.n_repeats = 10;
  // Presets divide squared distances by the site count.
  c.distance_normalization = DistanceNormalization::site_count;

  if (name == "fig2a" || name == "fig2b" || name == "supp-fig2") {
    c.experiment = Experiment::clock;
    c.n_sites = 8;
    c.n_samples = 500;
    c.f_grid = linspace(0.0, 1.0, 11);
    c.f_grid.front() = 0.02;
    c.theta_grid = linspace(0.0, std::numbers::pi / 3.0, 11);
    c.epsilons = {*epsilon_preset(name)};
    c.analyses = {.diffmap = true, .pca_kmeans = true, .entropy = true, .unique_count = true};
    c.kmeans_k = 3;
    c.n_repeats = 1;
  } else if (name == "fig3") {
    c.experiment = Experiment::j1j2;
    c.n_sites = 12;
    c.n_samples = 1000;
    c.j1 = 1.0;
    c.j2_list = linspace(0.0, 0.5, 6);
    c.g_list = {0.05};
    c.epsilons = default_grid_with(*epsilon_preset("fig3"));
    c.analyses = {.diffmap = true, .pca_kmeans = true, .entropy = true, .unique_count = true};
    c.kmeans_k = 2;
  } else if (name == "fig4") {
    c.experiment = Experiment::mbl;
    c.n_sites = 10;
    c.n_samples = 500;
    c.j = 1.0;
    c.h_list = {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0};
    c.n_realizations = 50;
    c.quench_time = kDefaultQuenchTime;
    c.epsilons = log_grid(1e-3, 1.0, 31);
    c.kernel = KernelVariant::density_normalized;
    c.analyses = {.diffmap = true, .pca_kmeans = false, .entropy = true, .unique_count = true};
  } else if (name == "supp-fig3") {
    c.experiment = Experiment::dimer;
    c.n_sites = 16;
    c.n_samples = 500;
    c.dimer_variants = {DimerVariant::single, DimerVariant::combined};
    c.epsilons = default_epsilon_grid();
    c.analyses = {.diffmap = true, .pca_kmeans = false, .entropy = false, .unique_count = true};
    c.n_repeats = 1;
  } else if (name == "supp-fig4") {
    c.experiment = Experiment::tfim_nnn;
    c.n_sites = 10;
    c.n_samples = 500;
    c.j = 1.0;
    c.tfim_j2 = 0.3;
    c.tfim_h = 0.6;
    c.delta_j_list = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    c.n_realizations = 50;
    c.epsilons = default_grid_with(*epsilon_preset("supp-fig4"));
    c.kernel = KernelVariant::density_normalized;
    c.analyses = {.diffmap = true, .pca_kmeans = false, .entropy = true, .unique_count = true};
  } else {
    throw ArgumentError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["n_sites"] = c.n_sites;
  j["f_grid"] = c.f_grid;
  j["theta_grid"] = c.theta_grid;
  j["j1"] = c.j1;
  j["j2_list"] = c.j2_list;
  j["g_list"] = c.g_list;
  j["j"] = c.j;
  j["h_list"] = c.h_list;
  j["delta_j_list"] = c.delta_j_list;
  j["tfim_j2"] = c.tfim_j2;
  j["tfim_h"] = c.tfim_h;
  json variants = json::array();
  for (DimerVariant v : c.dimer_variants) variants.push_back(to_string(v));
  j["dimer_variants"] = variants;
  j["blob_counts"] = c.blob_counts;
  j["flip_probability"] = c.flip_probability;
  j["n_samples"] = c.n_samples;
  j["n_realizations"] = c.n_realizations;
  j["n_repeats"] = c.n_repeats;
  j["quench_time"] = c.quench_time;
  j["epsilon"] = c.epsilons;
  j["delta"] = c.delta;
  j["kernel"] = to_string(c.kernel);
  j["distance_normalization"] = to_string(c.distance_normalization);
  j["basis"] = to_string(c.basis);
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["analyses"] = {{"diffmap", c.analyses.diffmap},
                   {"pca_kmeans", c.analyses.pca_kmeans},
                   {"entropy", c.analyses.entropy},
                   {"unique_count", c.analyses.unique_count}};
  j["pca_components"] = c.pca_components;
  j["kmeans_k"] = c.kmeans_k;
  j["kmeans_restarts"] = c.kmeans_restarts;
  j["workers"] = c.workers;
  j["write_samples"] = c.write_samples;
  j["preset"] = c.preset;
  return j.dump(2);
}

namespace {

template <class T>
T get_as(const json& value, std::string_view key) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ArgumentError("config: bad value for '" + std::string(key) + "': " + e.what());
  }
}

std::vector<double> epsilon_from_json(const json& value) {
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (auto grid = epsilon_grid_preset(name)) return *grid;
    throw ArgumentError("config: unknown epsilon preset '" + name + "'");
  }
  if (value.is_number()) return {value.get<double>()};
  return get_as<std::vector<double>>(value, "epsilon");
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text, ExperimentConfig c) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ArgumentError("config: top level must be an object");

  // The preset is applied first so that every other key overrides it.
  if (auto it = j.find("preset"); it != j.end()) {
    const auto name = get_as<std::string>(*it, "preset");
    if (!name.empty()) c = preset(name);
  }

  for (const auto& [key, value] : j.items()) {
    if (key == "preset") continue;
    else if (key == "experiment") c.experiment = parse_experiment(get_as<std::string>(value, key));
    else if (key == "n_sites") c.n_sites = get_as<std::size_t>(value, key);
    else if (key == "f_grid") c.f_grid = get_as<std::vector<double>>(value, key);
    else if (key == "theta_grid") c.theta_grid = get_as<std::vector<double>>(value, key);
    else if (key == "j1") c.j1 = get_as<double>(value, key);
    else if (key == "j2_list") c.j2_list = get_as<std::vector<double>>(value, key);
    else if (key == "g_list") c.g_list = get_as<std::vector<double>>(value, key);
    else if (key == "j") c.j = get_as<double>(value, key);
    else if (key == "h_list") c.h_list = get_as<std::vector<double>>(value, key);
    else if (key == "delta_j_list") c.delta_j_list = get_as<std::vector<double>>(value, key);
    else if (key == "tfim_j2") c.tfim_j2 = get_as<double>(value, key);
    else if (key == "tfim_h") c.tfim_h = get_as<double>(value, key);
    else if (key == "dimer_variants") {
      c.dimer_variants.clear();
      for (const auto& tag : get_as<std::vector<std::string>>(value, key))
        c.dimer_variants.push_back(parse_dimer_variant(tag));
    } else if (key == "blob_counts") c.blob_counts = get_as<std::vector<std::size_t>>(value, key);
    else if (key == "flip_probability") c.flip_probability = get_as<double>(value, key);
    else if (key == "n_samples") c.n_samples = get_as<std::size_t>(value, key);
    else if (key == "n_realizations") c.n_realizations = get_as<std::size_t>(value, key);
    else if (key == "n_repeats") c.n_repeats = get_as<std::size_t>(value, key);
    else if (key == "quench_time") c.quench_time = get_as<double>(value, key);
    else if (key == "epsilon") c.epsilons = epsilon_from_json(value);
    else if (key == "delta") c.delta = get_as<double>(value, key);
    else if (key == "kernel") c.kernel = parse_kernel_variant(get_as<std::string>(value, key));
    else if (key == "distance_normalization")
      c.distance_normalization = parse_distance_normalization(get_as<std::string>(value, key));
    else if (key == "basis") c.basis = parse_basis(get_as<std::string>(value, key));
    else if (key == "seed") c.seed = get_as<std::uint64_t>(value, key);
    else if (key == "output_dir") c.output_dir = get_as<std::string>(value, key);
    else if (key == "analyses") {
      if (!value.is_object()) throw ArgumentError("config: analyses must be an object");
      for (const auto& [name, flag] : value.items()) {
        const bool on = get_as<bool>(flag, name);
        if (name == "diffmap") c.analyses.diffmap = on;
        else if (name == "pca_kmeans") c.analyses.pca_kmeans = on;
        else if (name == "entropy") c.analyses.entropy = on;
        else if (name == "unique_count") c.analyses.unique_count = on;
        else throw ArgumentError("config: unknown analysis '" + name + "'");
      }
    } else if (key == "pca_components") c.pca_components = get_as<std::size_t>(value, key);
    else if (key == "kmeans_k") c.kmeans_k = get_as<std::size_t>(value, key);
    else if (key == "kmeans_restarts") c.kmeans_restarts = get_as<std::size_t>(value, key);
    else if (key == "workers") c.workers = get_as<std::size_t>(value, key);
    else if (key == "write_samples") c.write_samples = get_as<bool>(value, key);
    else throw ArgumentError("config: unknown key '" + key + "'");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str(), std::move(base));
}

}  // namespace phasemap
