#include <charconv>
#include <fstream>

#include <json.hpp>

#include "phasemap/error.hpp"
#include "phasemap/orchestrator.hpp"

namespace phasemap {

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, end);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> coordinate_names(const SweepResult& result) {
  if (!result.points.empty()) return result.points.front().names;
  // Header of an empty grid still names the coordinates of the experiment.
  const auto pts = grid_points(result.config);
  return pts.empty() ? std::vector<std::string>{} : pts.front().names;
}

void write_row(std::ostream& out, const SweepResult& result, const SweepRow& r) {
  const auto& c = result.config;
  out << to_string(c.experiment) << ',' << c.n_sites;
  for (const auto& label : result.points[r.point].labels) out << ',' << label;
  out << ',';
  if (r.aggregate)
    out << "mean";
  else
    out << r.realization << ':' << r.repeat;
  out << ',' << cell(r.epsilon) << ',';
  if (r.epsilon) out << to_string(c.kernel);
  out << ',' << cell(r.cluster_count) << ',' << cell(r.unique_count) << ',' << cell(r.entropy) << ','
      << cell(r.pca_label_mean) << ',' << cell(r.sem_cluster_count) << '\n';
}

}  // namespace

std::string csv_header(const SweepResult& result) {
  std::string h = "experiment,N";
  for (const auto& n : coordinate_names(result)) h += "," + n;
  h += ",realization,epsilon,kernel,cluster_count,unique_count,entropy,pca_label_mean,sem_cluster_count";
  return h;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << csv_header(result) << '\n';
  for (const auto& r : result.rows) write_row(out, result, r);
  for (const auto& r : result.aggregates) write_row(out, result, r);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void emit_json_meta(const SweepResult& result, const std::filesystem::path& path) {
  nlohmann::json meta;
  meta["config"] = nlohmann::json::parse(config_to_json(result.config));
  meta["seed"] = result.config.seed;
  meta["version"] = kToolVersion;
  meta["wall_time_seconds"] = result.wall_seconds;
  meta["grid_points"] = result.points.size();
  meta["rows"] = result.rows.size();
  meta["aggregate_rows"] = result.aggregates.size();
  meta["status"] = result.error ? "partial" : "complete";
  if (result.error) meta["error"] = *result.error;
  meta["streams"] =
      "samples keyed by (seed, hash(grid coordinates), realization, repeat); disorder keyed by (seed, realization)";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << meta.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace phasemap
