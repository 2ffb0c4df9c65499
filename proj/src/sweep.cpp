#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "phasemap/baselines.hpp"
#include "phasemap/error.hpp"
#include "phasemap/orchestrator.hpp"
#include "phasemap/solvers.hpp"

namespace phasemap {
namespace {

// Stream tags; each draw is keyed by (tag, ...) so that no two purposes share a stream.
constexpr std::uint64_t kTagSamples = 0x73616d70;   // "samp"
constexpr std::uint64_t kTagDisorder = 0x64697372;  // "disr"
constexpr std::uint64_t kTagLanczos = 0x6c616e63;   // "lanc"
constexpr std::uint64_t kTagCentres = 0x63656e74;   // "cent"
constexpr std::uint64_t kTagKmeans = 0x6b6d6e73;    // "kmns"

constexpr std::size_t kEigenvalueHead = 8;

/// Key of a grid point built from its coordinate values, so that the
/// streams of a point do not depend on what else is on the grid.
std::uint64_t point_key(const ExperimentConfig& config, const GridPoint& p) {
  std::uint64_t key = stream_id({static_cast<std::uint64_t>(config.experiment)});
  for (double v : p.values) key = stream_id({key, std::bit_cast<std::uint64_t>(v)});
  return key;
}

std::string describe(const GridPoint& p) {
  std::string s;
  for (std::size_t i = 0; i < p.names.size(); ++i) {
    if (i) s += ", ";
    s += p.names[i] + "=" + p.labels[i];
  }
  return s;
}

/// Disorder values in (-1, 1), one per entry, shared by every grid point.
std::vector<double> disorder_draws(const ExperimentConfig& config, std::size_t realization, std::size_t count) {
  RngStream rng(config.seed, stream_id({kTagDisorder, realization}));
  std::vector<double> u(count);
  for (double& x : u) x = 2.0 * rng.uniform_open() - 1.0;
  return u;
}

/// The quantum state measured at a grid point, or nullopt for the
/// experiments that sample without one.
std::optional<Ket> prepare_state(const ExperimentConfig& config, const GridPoint& p, std::size_t realization) {
  const std::size_t n = config.n_sites;
  const LanczosOptions lanczos{.tol = 1e-10, .max_iter = 4000, .seed = config.seed,
                               .stream = stream_id({kTagLanczos, point_key(config, p)})};
  switch (config.experiment) {
    case Experiment::clock: {
      const auto h = build_clock_hamiltonian({.n_sites = n, .f = p.values[0], .theta = p.values[1]});
      return ground_state(h, lanczos).state;
    }
    case Experiment::j1j2: {
      const auto h =
          build_j1j2_hamiltonian({.n_sites = n, .j1 = config.j1, .j2 = p.values[0], .g = p.values[1]});
      return ground_state(h, lanczos).state;
    }
    case Experiment::mbl: {
      HeisenbergDisorderParams params{.n_sites = n, .j = config.j, .h_max = p.values[0], .fields = {}};
      for (double u : disorder_draws(config, realization, n)) params.fields.push_back(u * p.values[0]);
      const EigenSystem eig = full_spectrum(build_heisenberg_disorder_hamiltonian(params));
      return evolve(eig, {neel_state(n), config.quench_time});
    }
    case Experiment::tfim_nnn: {
      TfimNnnParams params{.n_sites = n, .j = config.j, .delta_j_max = p.values[0], .couplings = {},
                           .j2 = config.tfim_j2, .h = config.tfim_h};
      for (double u : disorder_draws(config, realization, n - 1)) params.couplings.push_back(config.j + u * p.values[0]);
      const EigenSystem eig = full_spectrum(build_tfim_nnn_hamiltonian(params));
      return evolve(eig, {neel_state(n), config.quench_time});
    }
    case Experiment::dimer:
    case Experiment::synthetic:
      return std::nullopt;
  }
  return std::nullopt;
}

SampleMatrix draw_set(const ExperimentConfig& config, const GridPoint& p, std::size_t realization, std::size_t repeat,
                      const std::optional<Ket>& state) {
  const std::uint64_t key = point_key(config, p);
  RngStream rng(config.seed, stream_id({kTagSamples, key, realization, repeat}));
  const std::size_t n = config.n_sites;
  const std::size_t m = config.n_samples;
  switch (config.experiment) {
    case Experiment::dimer:
      return static_cast<DimerVariant>(p.values[0]) == DimerVariant::single
                 ? sample_dimer(n, DimerParity::A, m, rng)
                 : sample_combined_dimer(n, m, rng);
    case Experiment::synthetic: {
      const auto blobs = static_cast<std::size_t>(p.values[0]);
      RngStream centre_rng(config.seed, stream_id({kTagCentres, key, realization}));
      std::vector<std::uint8_t> centres(blobs * n);
      for (auto& d : centres) d = static_cast<std::uint8_t>(centre_rng.below(2));
      std::vector<std::uint8_t> digits(m * n);
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t b = rng.below(blobs);
        for (std::size_t s = 0; s < n; ++s) {
          const bool flip = rng.uniform_open() < config.flip_probability;
          digits[i * n + s] = static_cast<std::uint8_t>(centres[b * n + s] ^ (flip ? 1 : 0));
        }
      }
      return SampleMatrix(m, n, 2, Encoding::spin_half, std::move(digits), rng.seed(), rng.stream());
    }
    default:
      return draw_samples(*state, m, rng, config.basis);
  }
}

struct TaskOutput {
  std::vector<SweepRow> rows;
  std::vector<SampleMatrix> sets;  // kept only for pooled PCA
};

TaskOutput run_task(const ExperimentConfig& config, const std::vector<GridPoint>& points, std::size_t point,
                    std::size_t realization) {
  TaskOutput out;
  const GridPoint& p = points[point];
  const std::optional<Ket> state = prepare_state(config, p, realization);
  std::optional<double> entropy;
  if (config.analyses.entropy && state) entropy = half_chain_entropy(*state, config.n_sites / 2);

  for (std::size_t repeat = 0; repeat < config.n_repeats; ++repeat) {
    SampleMatrix samples = draw_set(config, p, realization, repeat, state);
    SweepRow base;
    base.point = point;
    base.realization = realization;
    base.repeat = repeat;
    base.stream = samples.stream();
    base.entropy = entropy;
    if (config.analyses.unique_count) base.unique_count = static_cast<double>(unique_row_count(samples));

    if (config.analyses.diffmap) {
      const auto results = epsilon_sweep(samples, config.epsilons, config.kernel, config.delta,
                                         config.distance_normalization);
      for (const auto& r : results) {
        SweepRow row = base;
        row.epsilon = r.epsilon;
        row.cluster_count = static_cast<double>(r.cluster_count);
        const auto head = std::min<Eigen::Index>(kEigenvalueHead, r.eigenvalues.size());
        row.eigenvalue_head.assign(r.eigenvalues.data(), r.eigenvalues.data() + head);
        out.rows.push_back(std::move(row));
      }
    } else if (config.analyses.any()) {
      out.rows.push_back(std::move(base));
    }

    if (config.write_samples) {
      const auto dir = std::filesystem::path(config.output_dir) / "samples";
      std::filesystem::create_directories(dir);
      write_samples_csv(samples, dir / ("p" + std::to_string(point) + "_r" + std::to_string(realization) + "_k" +
                                        std::to_string(repeat) + ".csv"));
    }
    if (config.analyses.pca_kmeans) out.sets.push_back(std::move(samples));
  }
  return out;
}

/// Mean label of every sample set from one PCA + k-means over all sets pooled.
std::vector<double> pooled_labels(const ExperimentConfig& config, const std::vector<const SampleMatrix*>& sets) {
  const RealMapping mapping =
      sets.front()->encoding() == Encoding::z3_phase ? RealMapping::z3_planar : RealMapping::none;
  Eigen::Index rows = 0;
  for (const auto* s : sets) rows += static_cast<Eigen::Index>(s->n_samples());
  const Eigen::MatrixXd first = real_features(*sets.front(), mapping);
  Eigen::MatrixXd data(rows, first.cols());
  std::vector<std::size_t> group;
  group.reserve(static_cast<std::size_t>(rows));
  Eigen::Index at = 0;
  for (std::size_t g = 0; g < sets.size(); ++g) {
    const Eigen::MatrixXd f = g == 0 ? first : real_features(*sets[g], mapping);
    data.middleRows(at, f.rows()) = f;
    at += f.rows();
    group.insert(group.end(), static_cast<std::size_t>(f.rows()), g);
  }
  const std::size_t components = std::min<std::size_t>(config.pca_components, static_cast<std::size_t>(data.cols()));
  const PcaResult reduced = pca(data, components);
  RngStream rng(config.seed, stream_id({kTagKmeans}));
  const KmeansResult km = kmeans(reduced.projections, config.kmeans_k, rng, {.restarts = config.kmeans_restarts});
  return average_label(km.labels, group, sets.size());
}

void aggregate(SweepResult& result) {
  // Group raw rows by (point, epsilon) in emission order.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<const SweepRow*>> groups;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  std::map<std::size_t, std::size_t> eps_slot;  // position of the epsilon within a (point, realization, repeat) block
  std::size_t slot = 0;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& r = result.rows[i];
    const bool new_block = i == 0 || r.point != result.rows[i - 1].point ||
                           r.realization != result.rows[i - 1].realization || r.repeat != result.rows[i - 1].repeat;
    slot = new_block ? 0 : slot + 1;
    const std::pair<std::size_t, std::size_t> key{r.point, slot};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::sort(order.begin(), order.end());

  auto mean_of = [](const std::vector<const SweepRow*>& rows, auto field) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto* r : rows)
      if (const auto& v = r->*field) {
        sum += *v;
        ++n;
      }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };

  for (const auto& key : order) {
    const auto& rows = groups[key];
    SweepRow a;
    a.aggregate = true;
    a.point = key.first;
    a.epsilon = rows.front()->epsilon;
    a.cluster_count = mean_of(rows, &SweepRow::cluster_count);
    a.unique_count = mean_of(rows, &SweepRow::unique_count);
    a.entropy = mean_of(rows, &SweepRow::entropy);
    a.pca_label_mean = mean_of(rows, &SweepRow::pca_label_mean);
    if (a.cluster_count) {
      double ss = 0.0;
      std::size_t n = 0;
      for (const auto* r : rows)
        if (r->cluster_count) {
          ss += (*r->cluster_count - *a.cluster_count) * (*r->cluster_count - *a.cluster_count);
          ++n;
        }
      a.sem_cluster_count = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    }
    result.aggregates.push_back(std::move(a));
  }
}

}  // namespace

std::vector<GridPoint> grid_points(const ExperimentConfig& c) {
  std::vector<GridPoint> points;
  auto add = [&](std::vector<std::string> names, std::vector<double> values, std::vector<std::string> labels = {}) {
    if (labels.empty())
      for (double v : values) labels.push_back(format_double(v));
    points.push_back({std::move(names), std::move(values), std::move(labels)});
  };
  switch (c.experiment) {
    case Experiment::clock:
      for (double f : c.f_grid)
        for (double t : c.theta_grid) add({"f", "theta"}, {f, t});
      break;
    case Experiment::j1j2:
      for (double g : c.g_list)
        for (double j2 : c.j2_list) add({"J2", "g"}, {j2, g});
      break;
    case Experiment::mbl:
      for (double h : c.h_list) add({"h"}, {h});
      break;
    case Experiment::tfim_nnn:
      for (double dj : c.delta_j_list) add({"delta_J"}, {dj});
      break;
    case Experiment::dimer:
      for (DimerVariant v : c.dimer_variants)
        add({"variant"}, {static_cast<double>(v)}, {std::string(to_string(v))});
      break;
    case Experiment::synthetic:
      for (std::size_t b : c.blob_counts) add({"blobs"}, {static_cast<double>(b)});
      break;
  }
  return points;
}

std::uint64_t sample_stream(const ExperimentConfig& config, std::size_t point, std::size_t realization,
                            std::size_t repeat) {
  const auto points = grid_points(config);
  if (point >= points.size()) throw ArgumentError("sample_stream: point index out of range");
  return stream_id({kTagSamples, point_key(config, points[point]), realization, repeat});
}

SampleMatrix regenerate_samples(const ExperimentConfig& config, std::size_t point, std::size_t realization,
                                std::size_t repeat) {
  validate(config);
  const auto points = grid_points(config);
  if (point >= points.size()) throw ArgumentError("regenerate_samples: point index out of range");
  if (realization >= config.effective_realizations() || repeat >= config.n_repeats)
    throw ArgumentError("regenerate_samples: realization or repeat out of range");
  const auto state = prepare_state(config, points[point], realization);
  return draw_set(config, points[point], realization, repeat, state);
}

SweepResult run_sweep(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  SweepResult result;
  result.config = config;
  result.points = grid_points(config);

  const std::size_t n_real = config.effective_realizations();
  const std::size_t n_tasks = result.points.size() * n_real;
  std::vector<std::optional<TaskOutput>> outputs(n_tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_task = n_tasks;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t t = next.fetch_add(1);
      if (t >= n_tasks) return;
      try {
        outputs[t] = run_task(config, result.points, t / n_real, t % n_real);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (t < error_task) {
          error_task = t;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };
  const std::size_t n_workers = std::min(config.workers, std::max<std::size_t>(1, n_tasks));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  // Single writer: concatenate in task order.
  std::vector<std::pair<std::size_t, std::size_t>> set_rows;  // (first row, row count) of each sample set
  std::vector<const SampleMatrix*> sets;
  for (std::size_t t = 0; t < n_tasks; ++t) {
    if (!outputs[t]) continue;
    std::size_t prev_repeat = std::numeric_limits<std::size_t>::max();
    for (auto& row : outputs[t]->rows) {
      if (row.repeat != prev_repeat) set_rows.emplace_back(result.rows.size(), 0);
      prev_repeat = row.repeat;
      ++set_rows.back().second;
      result.rows.push_back(std::move(row));
    }
    for (const auto& s : outputs[t]->sets) sets.push_back(&s);
  }

  if (error) {
    aggregate(result);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string what;
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
      what = "unknown error";
    }
    const auto& p = result.points[error_task / n_real];
    std::string msg = "sweep failed at grid point " + describe(p);
    if (config.disordered()) msg += ", realization " + std::to_string(error_task % n_real);
    msg += ": " + what;
    result.error = msg;
    throw SweepError(msg, std::move(result), error);
  }

  if (config.analyses.pca_kmeans && !sets.empty()) {
    const auto labels = pooled_labels(config, sets);
    for (std::size_t g = 0; g < sets.size(); ++g)
      for (std::size_t i = 0; i < set_rows[g].second; ++i) result.rows[set_rows[g].first + i].pca_label_mean = labels[g];
  }
  aggregate(result);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SweepResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  try {
    SweepResult result = run_sweep(config);
    emit_csv(result, dir / "results.csv");
    emit_json_meta(result, dir / "meta.json");
    return result;
  } catch (const SweepError& e) {
    emit_csv(e.partial(), dir / "results.csv");
    emit_json_meta(e.partial(), dir / "meta.json");
    throw;
  }
}

}  // namespace phasemap
