// phasemap command-line interface.
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "phasemap/diffmap.hpp"
#include "phasemap/error.hpp"
#include "phasemap/oracle.hpp"
#include "phasemap/orchestrator.hpp"

namespace {

using namespace phasemap;

std::vector<double> parse_epsilons(const std::string& text) {
  if (auto grid = epsilon_grid_preset(text)) return *grid;
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError("bad epsilon '" + item + "' (expected a number list or a preset name)");
    }
  }
  if (out.empty()) throw ArgumentError("empty epsilon list");
  return out;
}

int run_command(const std::string& config_path, const std::string& preset_name, std::optional<std::uint64_t> seed,
                std::optional<std::size_t> workers, const std::string& out_dir) {
  ExperimentConfig config;
  if (!preset_name.empty()) config = preset(preset_name);
  if (!config_path.empty()) config = load_config(config_path, config);
  if (config_path.empty() && preset_name.empty()) throw ArgumentError("run: give --config, --preset, or both");
  if (seed) config.seed = *seed;
  if (workers) {
    config.workers = *workers;
  } else if (const char* env = std::getenv("PHASEMAP_WORKERS")) {
    try {
      config.workers = std::stoul(env);
    } catch (const std::exception&) {
      throw ArgumentError(std::string("PHASEMAP_WORKERS is not a count: '") + env + "'");
    }
  }
  if (!out_dir.empty()) config.output_dir = out_dir;

  const SweepResult result = run_experiment(config);
  std::cerr << "wrote " << result.rows.size() << " rows and " << result.aggregates.size() << " aggregates to "
            << config.output_dir << " in " << result.wall_seconds << " s\n";
  return 0;
}

int dimer_pmf_command(std::size_t n, const std::string& variant) {
  const PairDistancePmf pmf = dimer_pair_pmf(n, parse_dimer_variant(variant));
  std::cout << "k,probability\n";
  for (std::size_t k = 0; k < pmf.probabilities.size(); ++k)
    std::cout << k << ',' << format_double(pmf.probabilities[k]) << '\n';
  return 0;
}

int diffmap_command(const std::string& path, const std::string& epsilon_text, double delta, const std::string& kernel,
                    const std::string& normalization) {
  const SampleMatrix samples = read_samples_csv(path);
  const auto eps = parse_epsilons(epsilon_text);
  const auto results = epsilon_sweep(samples, eps, parse_kernel_variant(kernel), delta,
                                     parse_distance_normalization(normalization));
  const std::size_t unique = unique_row_count(samples);
  std::cout << "epsilon,kernel,cluster_count,unique_count\n";
  for (const auto& r : results)
    std::cout << format_double(r.epsilon) << ',' << to_string(r.kernel) << ',' << r.cluster_count << ',' << unique
              << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase detection from measurement samples with diffusion maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(phasemap::kToolVersion));

  std::string config_path, preset_name, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  auto* run = app.add_subcommand("run", "Run a parameter sweep and write results.csv and meta.json");
  run->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  run->add_option("--preset", preset_name, "Start from a named preset (fig2a, fig2b, fig3, fig4, supp-fig2..4)");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--workers", workers, "Worker threads (fallback: PHASEMAP_WORKERS)")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");

  std::size_t pmf_n = 0;
  std::string pmf_variant = "s";
  auto* oracle = app.add_subcommand("oracle", "Closed-form reference quantities");
  oracle->require_subcommand(1);
  auto* pmf = oracle->add_subcommand("dimer-pmf", "Pair Hamming-distance pmf of dimer measurement samples");
  pmf->add_option("--n", pmf_n, "Number of sites (even)")->required();
  pmf->add_option("--variant", pmf_variant, "s (single covering) or c (combined)");

  std::string samples_path, epsilon_text = "default", kernel = "g", normalization = "max-separation";
  double delta = phasemap::kDefaultDelta;
  auto* dm = app.add_subcommand("diffmap", "Cluster counts of a sample CSV over an epsilon grid");
  dm->add_option("--samples", samples_path, "Sample CSV")->required()->check(CLI::ExistingFile);
  dm->add_option("--epsilon", epsilon_text, "Comma-separated values or a preset name");
  dm->add_option("--delta", delta, "Eigenvalue gap threshold");
  dm->add_option("--kernel", kernel, "g (gaussian) or dn (density-normalized)");
  dm->add_option("--normalization", normalization, "max-separation or site-count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, preset_name, seed, workers, out_dir);
    if (*pmf) return dimer_pmf_command(pmf_n, pmf_variant);
    if (*dm) return diffmap_command(samples_path, epsilon_text, delta, kernel, normalization);
  } catch (const phasemap::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
