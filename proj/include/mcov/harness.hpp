#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcov/evasion.hpp"
#include "mcov/motion.hpp"

namespace mcov::harness {

struct SimulationConfig {
  int N = 10;
  double r = 0.1;
  motion::ModelParams model = motion::BrownianParams{};
  double dt_base = 0.01;
  double dt_min = 0.01 / 1048576.0;
  double t_cap = 50.0;
  std::uint64_t seed = 0;
  evasion::Mode mode = evasion::Mode::Connected;
  bool record_events = true;
  bool record_steps = false;
};

struct SimulationResult {
  /// First time no label is true; empty if the run hit t_cap (censored).
  std::optional<double> t_max;
  double t_cap = 0.0;
  bool static_coverage = false;
  int n_events = 0;
  int fallback_count = 0;
  int bisections = 0;
  std::vector<evasion::ReebEvent> events;
  std::vector<evasion::AcceptedStep> steps;
  evasion::CycleLabelling initial_labels;
  evasion::CycleLabelling final_labels;

  bool censored() const { return !t_max.has_value(); }
};

SimulationResult run_simulation(const SimulationConfig& config);
/// Runs from a given initial state with a given motion model; `config.model`
/// and `config.seed` only affect the jitter seed.
SimulationResult run_simulation(const SimulationConfig& config, const motion::MotionState& initial,
                                motion::MotionModel& model);

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
/// Seed of trial `trial` in cell `cell`; independent of evaluation order.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t cell, std::uint64_t trial);

struct Cell {
  int N = 10;
  double r = 0.1;
  motion::ModelParams model = motion::BrownianParams{};
};

struct TrialOutcome {
  std::optional<double> t_max;
  bool static_coverage = false;
  bool failed = false;
  std::string error;
  int fallback_count = 0;
  std::vector<evasion::ReebEvent> events;
};

struct StatsRow {
  std::string model;
  int N = 0;
  double r = 0.0;
  int trials = 0;
  int censored = 0;
  int failures = 0;
  double mean_tmax = 0.0;
  double var_tmax = 0.0;
  /// Variance needs two completed trials; set when fewer were available.
  bool var_undefined = false;
  double coverage_prob = 0.0;
  std::vector<double> hist_edges;
  std::vector<int> hist_counts;

  /// Standard error of mean_tmax.
  double se_mean() const;
  /// Standard error of coverage_prob.
  double se_coverage() const;
};

constexpr int kHistogramBins = 50;

StatsRow aggregate(const Cell& cell, std::span<const TrialOutcome> trials);

struct SweepOptions {
  int trials = 1;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  /// Supplies dt, dt_min, t_cap and mode; N, r, model and seed are per cell.
  SimulationConfig base;
  bool keep_events = false;
};

struct SweepResult {
  std::vector<StatsRow> rows;
  std::vector<std::vector<TrialOutcome>> trials;
};

SweepResult monte_carlo_sweep(std::span<const Cell> grid, const SweepOptions& options);

/// Per-step evasion feasibility on a grid over S. A cell is uncovered when its
/// centre is farther than r from every active sensor; a cell is reachable if it
/// is uncovered and connected through uncovered cells to a cell that was
/// reachable (or 4-adjacent to one) at the previous step.
///
/// `substeps` > 1 inserts linearly interpolated configurations between
/// consecutive samples; only the samples themselves are reported.
std::vector<bool> brute_force_oracle(std::span<const evasion::AcceptedStep> steps, double r, double pitch,
                                     int substeps = 1);

struct OracleComparison {
  bool agree = true;
  int steps = 0;
  int disagreeing_steps = 0;
  /// Maximal runs of consecutive disagreeing steps.
  int episodes = 0;
  /// First disagreeing step, if any.
  std::optional<std::size_t> first_disagreement;
  /// Largest disputed feature over all episodes.
  double feature_diameter = 0.0;
  /// Every disputed feature is smaller than three grid pitches.
  bool attributable = true;
};

/// Compares the labelling's per-step evasion flag against the oracle. Each run
/// of disagreeing steps is charged to the feature the two sides dispute at its
/// first step: the reachable region when only the oracle sees an escape, or
/// the reachable region of the previous step (which the grid lost) when only
/// the labels do. At step 0 the latter is the set of uncovered cells inside
/// true-labelled faces.
OracleComparison compare_with_oracle(const SimulationResult& result, double r, double pitch, int substeps = 1);

struct OutputManifest {
  std::uint64_t base_seed = 0;
  bool seed_from_entropy = false;
  nlohmann::json config;
  /// Write per-trial event logs.
  bool include_events = false;
};

std::string stats_csv_header();
std::string stats_csv_line(const StatsRow& row);

/// Writes stats.csv, manifest.json and, if requested,
/// events/<cell>/<trial>.jsonl. Throws IoError naming the failing path.
void write_outputs(std::span<const StatsRow> rows, const std::vector<std::vector<TrialOutcome>>& trials,
                   const OutputManifest& manifest, const std::filesystem::path& out_dir);

void write_events(std::span<const evasion::ReebEvent> events, const std::filesystem::path& path);

std::string code_version();

}  // namespace mcov::harness
