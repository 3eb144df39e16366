#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcov/evasion.hpp"
#include "mcov/harness.hpp"
#include "mcov/motion.hpp"

namespace mcov::config {

constexpr int kSchemaVersion = 1;

/// A validated configuration file. Scalars for N, r and model describe a
/// single cell; lists describe the Cartesian product grid.
struct RunConfig {
  int schema_version = kSchemaVersion;
  std::vector<motion::ModelParams> models;
  std::vector<int> N;
  std::vector<double> r;
  double dt = 0.01;
  std::optional<double> dt_min;
  double t_cap = 50.0;
  int trials = 1;
  evasion::Mode mode = evasion::Mode::Connected;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  double effective_dt_min() const { return dt_min.value_or(dt / 1048576.0); }
  /// Cells ordered model-major, then N, then r.
  std::vector<harness::Cell> grid() const;
  /// Simulation settings of one cell.
  harness::SimulationConfig simulation(const harness::Cell& cell, std::uint64_t seed) const;
};

/// Applies "a.b=value" to a JSON document. The value is parsed as JSON and
/// taken as a plain string if that fails.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Throws SchemaError (with a JSON pointer) or RangeError.
RunConfig parse_config(nlohmann::json doc, std::span<const std::string> overrides = {});
RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});

nlohmann::json model_to_json(const motion::ModelParams& model);
nlohmann::json to_json(const RunConfig& config);

}  // namespace mcov::config
