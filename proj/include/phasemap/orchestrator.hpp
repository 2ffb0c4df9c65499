#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phasemap/diffmap.hpp"
#include "phasemap/oracle.hpp"
#include "phasemap/sampling.hpp"

namespace phasemap {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Experiment { clock, j1j2, mbl, tfim_nnn, dimer, synthetic };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view tag);

struct Analyses {
  bool diffmap = true;
  bool pca_kmeans = false;
  bool entropy = true;
  bool unique_count = true;

  bool any() const noexcept { return diffmap || pca_kmeans || entropy || unique_count; }
};

/// Everything a sweep needs. JSON keys match the member names; `epsilon`
/// accepts a list, a single number, or a preset name.
struct ExperimentConfig {
  Experiment experiment = Experiment::synthetic;
  std::size_t n_sites = 8;

  // clock
  std::vector<double> f_grid{0.5};
  std::vector<double> theta_grid{0.0};
  // j1j2
  double j1 = 1.0;
  std::vector<double> j2_list{0.0};
  std::vector<double> g_list{0.05};
  // mbl
  double j = 1.0;
  std::vector<double> h_list{1.0};
  // tfim-nnn (nearest-neighbour mean coupling is `j`)
  std::vector<double> delta_j_list{1.0};
  double tfim_j2 = 0.3;
  double tfim_h = 0.6;
  // dimer
  std::vector<DimerVariant> dimer_variants{DimerVariant::single, DimerVariant::combined};
  // synthetic: random centre configurations, each site flipped with flip_probability
  std::vector<std::size_t> blob_counts{3};
  double flip_probability = 0.0;

  std::size_t n_samples = 500;
  std::size_t n_realizations = 50;  // disorder experiments only
  std::size_t n_repeats = 10;       // resampling repeats per state
  double quench_time = 1e4;
  std::vector<double> epsilons = default_epsilon_grid();
  double delta = kDefaultDelta;
  KernelVariant kernel = KernelVariant::gaussian;
  DistanceNormalization distance_normalization = DistanceNormalization::max_separation;
  Basis basis = Basis::computational;
  std::uint64_t seed = 1;
  std::string output_dir = "phasemap-out";
  Analyses analyses;
  std::size_t pca_components = 2;
  std::size_t kmeans_k = 3;
  std::size_t kmeans_restarts = 10;
  std::size_t workers = 1;
  bool write_samples = false;
  std::string preset;  // informational

  bool disordered() const noexcept { return experiment == Experiment::mbl || experiment == Experiment::tfim_nnn; }
  std::size_t effective_realizations() const noexcept { return disordered() ? n_realizations : 1; }
};

/// Throws ArgumentError on an invalid configuration.
void validate(const ExperimentConfig& config);

/// Epsilon grid from a preset name ("default" or a figure name) or nullopt.
std::optional<std::vector<double>> epsilon_grid_preset(std::string_view name);

/// Names accepted by `preset`.
const std::vector<std::string>& preset_names();

/// Desk-scale configuration reproducing one figure.
ExperimentConfig preset(std::string_view name);

std::string config_to_json(const ExperimentConfig& config);
/// Keys present in `json_text` override the fields of `base`; unknown keys are an error.
ExperimentConfig config_from_json(std::string_view json_text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// A parameter point of the sweep: coordinate names/values in CSV order.
struct GridPoint {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<std::string> labels;  // CSV text of each coordinate
};

std::vector<GridPoint> grid_points(const ExperimentConfig& config);

struct SweepRow {
  std::size_t point = 0;
  std::size_t realization = 0;
  std::size_t repeat = 0;
  bool aggregate = false;
  std::optional<double> epsilon;
  std::optional<double> cluster_count;
  std::optional<double> unique_count;
  std::optional<double> entropy;
  std::optional<double> pca_label_mean;
  std::optional<double> sem_cluster_count;  // aggregate rows only
  std::vector<double> eigenvalue_head;      // leading diffusion eigenvalues
  std::uint64_t stream = 0;                 // sample stream of raw rows
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<GridPoint> points;
  std::vector<SweepRow> rows;        // raw, ordered by (point, realization, repeat, epsilon)
  std::vector<SweepRow> aggregates;  // one per (point, epsilon)
  double wall_seconds = 0.0;
  std::optional<std::string> error;  // set on a partial result
};

/// A sweep aborted by an error at one grid point. Carries whatever completed
/// and the original exception.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, SweepResult partial, std::exception_ptr cause)
      : std::runtime_error(what), partial_(std::move(partial)), cause_(std::move(cause)) {}
  const SweepResult& partial() const noexcept { return partial_; }
  std::exception_ptr cause() const noexcept { return cause_; }

 private:
  SweepResult partial_;
  std::exception_ptr cause_;
};

/// Stream id of the samples for (point, realization, repeat).
std::uint64_t sample_stream(const ExperimentConfig& config, std::size_t point, std::size_t realization,
                            std::size_t repeat);

/// Rebuild one sample set exactly as the sweep drew it.
SampleMatrix regenerate_samples(const ExperimentConfig& config, std::size_t point, std::size_t realization,
                                std::size_t repeat);

/// Compute the sweep without touching the filesystem (unless write_samples).
/// Output is independent of `config.workers`.
SweepResult run_sweep(const ExperimentConfig& config);

/// run_sweep plus results.csv and meta.json in config.output_dir. On error
/// the completed rows are flushed before the exception propagates.
SweepResult run_experiment(const ExperimentConfig& config);

std::string csv_header(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::filesystem::path& path);
void emit_json_meta(const SweepResult& result, const std::filesystem::path& path);

/// Shortest round-trip decimal text.
std::string format_double(double v);

}  // namespace phasemap
