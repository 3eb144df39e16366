#include <fstream>

#include "mcov/harness.hpp"

#ifndef MCOV_CODE_VERSION
#define MCOV_CODE_VERSION "0.1.0"
#endif

namespace mcov::harness {
namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void make_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string num(double x) { return nlohmann::json(x).dump(); }

}  // namespace

std::string code_version() { return MCOV_CODE_VERSION; }

std::string stats_csv_header() {
  return "model,N,r,trials,censored,mean_tmax,var_tmax,coverage_prob,hist_edges,hist_counts";
}

std::string stats_csv_line(const StatsRow& row) {
  // JSON arrays hold commas but never quotes, so quoting the cell suffices.
  return row.model + "," + std::to_string(row.N) + "," + num(row.r) + "," + std::to_string(row.trials) + "," +
         std::to_string(row.censored) + "," + num(row.mean_tmax) + "," + num(row.var_tmax) + "," +
         num(row.coverage_prob) + ",\"" + nlohmann::json(row.hist_edges).dump() + "\",\"" +
         nlohmann::json(row.hist_counts).dump() + "\"";
}

void write_events(std::span<const evasion::ReebEvent> events, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& e : events) out << evasion::to_json(e).dump() << '\n';
  finish(out, path);
}

void write_outputs(std::span<const StatsRow> rows, const std::vector<std::vector<TrialOutcome>>& trials,
                   const OutputManifest& manifest, const std::filesystem::path& out_dir) {
  make_dirs(out_dir);

  const auto csv_path = out_dir / "stats.csv";
  auto csv = open_for_write(csv_path);
  csv << stats_csv_header() << '\n';
  for (const auto& row : rows) csv << stats_csv_line(row) << '\n';
  finish(csv, csv_path);

  if (manifest.include_events) {
    for (std::size_t c = 0; c < trials.size(); ++c) {
      const auto dir = out_dir / "events" / std::to_string(c);
      make_dirs(dir);
      for (std::size_t t = 0; t < trials[c].size(); ++t) {
        write_events(trials[c][t].events, dir / (std::to_string(t) + ".jsonl"));
      }
    }
  }

  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t c = 0; c < rows.size(); ++c) {
    nlohmann::json cell{{"index", c},
                        {"model", rows[c].model},
                        {"N", rows[c].N},
                        {"r", rows[c].r},
                        {"failures", rows[c].failures},
                        {"var_undefined", rows[c].var_undefined}};
    if (c < trials.size()) {
      nlohmann::json errors = nlohmann::json::array();
      for (std::size_t t = 0; t < trials[c].size(); ++t) {
        if (trials[c][t].failed) errors.push_back({{"trial", t}, {"error", trials[c][t].error}});
      }
      if (!errors.empty()) cell["errors"] = errors;
    }
    cells.push_back(cell);
  }
  const nlohmann::json doc{{"schema_version", 1},
                           {"code_version", code_version()},
                           {"base_seed", manifest.base_seed},
                           {"seed_from_entropy", manifest.seed_from_entropy},
                           {"config", manifest.config},
                           {"cells", cells}};
  const auto manifest_path = out_dir / "manifest.json";
  auto out = open_for_write(manifest_path);
  out << doc.dump(2) << '\n';
  finish(out, manifest_path);
}

}  // namespace mcov::harness
