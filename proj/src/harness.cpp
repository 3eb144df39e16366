#include "mcov/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace mcov::harness {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t cell, std::uint64_t trial) {
  return mix_seed(mix_seed(base_seed, cell), trial);
}

SimulationResult run_simulation(const SimulationConfig& config) {
  motion::ModelParams params = config.model;
  if (auto* d = std::get_if<motion::DOrsognaParams>(&params)) d->cutoff = 2.0 * config.r;

  motion::Rng init_rng(mix_seed(config.seed, 1));
  const motion::MotionState initial =
      motion::init_network(motion::DomainSpec::for_radius(config.r), config.N, params, init_rng);
  auto model = motion::make_model(params, mix_seed(config.seed, 2));
  return run_simulation(config, initial, *model);
}

SimulationResult run_simulation(const SimulationConfig& config, const motion::MotionState& initial,
                                motion::MotionModel& model) {
  const evasion::FenceRange fence{0, static_cast<SensorId>(initial.fence_count)};
  evasion::StepOptions options;
  options.r = config.r;
  options.dt_min = config.dt_min;
  options.jitter_seed = mix_seed(config.seed, 3);
  options.record_steps = config.record_steps;

  SimulationResult result;
  result.t_cap = config.t_cap;

  evasion::StateSnapshot snapshot =
      evasion::make_snapshot(initial.time, initial.positions, config.r, fence, config.mode, options.jitter_seed);
  snapshot.labelling = evasion::initial_labelling(snapshot);
  result.initial_labels = snapshot.labelling;
  result.static_coverage = !evasion::evasion_possible(snapshot.labelling);
  if (config.record_steps) result.steps.push_back(evasion::accepted_step(snapshot));

  motion::MotionState state = initial;
  if (result.static_coverage) {
    result.t_max = initial.time;
  } else {
    // Step boundaries are k * dt_base exactly, so long runs do not drift.
    for (long k = 1;; ++k) {
      const double target = initial.time + static_cast<double>(k) * config.dt_base;
      if (target > initial.time + config.t_cap + 1e-9 * config.dt_base) break;
      auto out = evasion::adaptive_step(snapshot, state, model, target - state.time, options);
      result.fallback_count += out.fallbacks;
      result.bisections += out.bisections;
      result.n_events += static_cast<int>(out.events.size());
      if (config.record_events) {
        result.events.insert(result.events.end(), std::make_move_iterator(out.events.begin()),
                             std::make_move_iterator(out.events.end()));
      }
      if (config.record_steps) {
        result.steps.insert(result.steps.end(), std::make_move_iterator(out.steps.begin()),
                            std::make_move_iterator(out.steps.end()));
      }
      snapshot = std::move(out.snapshot);
      state = std::move(out.motion);
      if (out.cleared_at) {
        result.t_max = *out.cleared_at;
        break;
      }
    }
  }
  result.final_labels = snapshot.labelling;
  return result;
}

double StatsRow::se_mean() const {
  const int n = trials - censored - failures;
  if (n < 2 || var_undefined) return 0.0;
  return std::sqrt(var_tmax / n);
}

double StatsRow::se_coverage() const {
  const int n = trials - failures;
  if (n < 1) return 0.0;
  return std::sqrt(coverage_prob * (1.0 - coverage_prob) / n);
}

StatsRow aggregate(const Cell& cell, std::span<const TrialOutcome> trials) {
  StatsRow row;
  row.model = motion::model_tag(cell.model);
  row.N = cell.N;
  row.r = cell.r;
  row.trials = static_cast<int>(trials.size());

  std::vector<double> done;
  int covered = 0;
  for (const auto& t : trials) {
    if (t.failed) {
      ++row.failures;
      continue;
    }
    if (t.static_coverage) ++covered;
    if (t.t_max) {
      done.push_back(*t.t_max);
    } else {
      ++row.censored;
    }
  }
  const int usable = row.trials - row.failures;
  row.coverage_prob = usable > 0 ? static_cast<double>(covered) / usable : 0.0;

  if (!done.empty()) {
    double sum = 0.0;
    for (double x : done) sum += x;
    row.mean_tmax = sum / static_cast<double>(done.size());
  }
  if (done.size() >= 2) {
    double ss = 0.0;
    for (double x : done) ss += (x - row.mean_tmax) * (x - row.mean_tmax);
    row.var_tmax = ss / static_cast<double>(done.size() - 1);
  } else {
    row.var_undefined = true;
  }

  if (!done.empty()) {
    const double top = *std::max_element(done.begin(), done.end());
    const double hi = top > 0.0 ? top : 1.0;
    row.hist_edges.resize(kHistogramBins + 1);
    for (int i = 0; i <= kHistogramBins; ++i) row.hist_edges[i] = hi * i / kHistogramBins;
    row.hist_counts.assign(kHistogramBins, 0);
    for (double x : done) {
      int bin = static_cast<int>(x / hi * kHistogramBins);
      row.hist_counts[std::clamp(bin, 0, kHistogramBins - 1)]++;
    }
  }
  return row;
}

SweepResult monte_carlo_sweep(std::span<const Cell> grid, const SweepOptions& options) {
  if (options.trials < 1) throw RangeError("trials must be at least 1");
  SweepResult out;
  out.trials.assign(grid.size(), std::vector<TrialOutcome>(options.trials));

  const std::size_t total = grid.size() * static_cast<std::size_t>(options.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t c = job / options.trials;
      const std::size_t t = job % options.trials;
      SimulationConfig cfg = options.base;
      cfg.N = grid[c].N;
      cfg.r = grid[c].r;
      cfg.model = grid[c].model;
      cfg.seed = trial_seed(options.base_seed, c, t);
      cfg.record_events = options.keep_events;
      cfg.record_steps = false;

      TrialOutcome& slot = out.trials[c][t];
      try {
        SimulationResult res = run_simulation(cfg);
        slot.t_max = res.t_max;
        slot.static_coverage = res.static_coverage;
        slot.fallback_count = res.fallback_count;
        slot.events = std::move(res.events);
      } catch (const std::exception& e) {
        slot.failed = true;
        slot.error = e.what();
      }
    }
  };

  const int jobs = std::max(1, options.jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t c = 0; c < grid.size(); ++c) out.rows.push_back(aggregate(grid[c], out.trials[c]));
  return out;
}

}  // namespace mcov::harness
