#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcov/config.hpp"
#include "mcov/harness.hpp"

namespace {

using namespace mcov;

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

int report_error(const std::string& kind, const std::string& path, const std::string& message, int code) {
  std::cerr << "error kind=" << kind << " path=" << (path.empty() ? "-" : path) << " message=" << quoted(message)
            << '\n';
  return code;
}

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("EVASION_OUT_DIR"); env && *env) return env;
  return "out";
}

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct Loaded {
  config::RunConfig cfg;
  std::uint64_t seed = 0;
  bool from_entropy = false;
  std::filesystem::path out;
};

Loaded load(const Common& c) {
  Loaded l;
  l.cfg = config::load_config(c.config_path, c.overrides);
  if (c.seed) {
    l.cfg.seed = c.seed;
  } else if (!l.cfg.seed) {
    l.cfg.seed = entropy_seed();
    l.from_entropy = true;
  }
  l.seed = *l.cfg.seed;
  l.out = c.out_dir.empty() ? default_out_dir() : std::filesystem::path(c.out_dir);
  return l;
}

nlohmann::json t_max_json(const std::optional<double>& t) { return t ? nlohmann::json(*t) : nlohmann::json(); }

int run_simulate(const Common& common) {
  const Loaded l = load(common);
  const auto cells = l.cfg.grid();
  if (cells.size() != 1) throw SchemaError("/N", "simulate needs a single (model, N, r) cell");
  const auto sim = l.cfg.simulation(cells[0], harness::trial_seed(l.seed, 0, 0));
  const auto res = harness::run_simulation(sim);

  harness::TrialOutcome trial{res.t_max, res.static_coverage, false, "", res.fallback_count, res.events};
  const std::vector<harness::TrialOutcome> trials{trial};
  const auto row = harness::aggregate(cells[0], trials);
  harness::OutputManifest manifest{l.seed, l.from_entropy, config::to_json(l.cfg), true};
  harness::write_outputs(std::span(&row, 1), {trials}, manifest, l.out);

  std::cout << nlohmann::json{{"t_max", t_max_json(res.t_max)},
                              {"censored", res.censored()},
                              {"static_coverage", res.static_coverage},
                              {"events", res.n_events},
                              {"fallbacks", res.fallback_count},
                              {"seed", l.seed},
                              {"out", l.out.string()}}
                   .dump()
            << '\n';
  return 0;
}

int run_sweep(const Common& common, int trials, int jobs, bool events) {
  Loaded l = load(common);
  if (trials > 0) l.cfg.trials = trials;
  const auto cells = l.cfg.grid();

  harness::SweepOptions opts;
  opts.trials = l.cfg.trials;
  opts.base_seed = l.seed;
  opts.jobs = jobs;
  opts.base = l.cfg.simulation(cells.front(), l.seed);
  opts.keep_events = events;
  const auto result = harness::monte_carlo_sweep(cells, opts);

  harness::OutputManifest manifest{l.seed, l.from_entropy, config::to_json(l.cfg), events};
  harness::write_outputs(result.rows, result.trials, manifest, l.out);
  std::cout << harness::stats_csv_header() << '\n';
  for (const auto& row : result.rows) std::cout << harness::stats_csv_line(row) << '\n';
  return 0;
}

int run_oracle_check(const Common& common, int trials, double pitch, int substeps) {
  Loaded l = load(common);
  if (trials > 0) l.cfg.trials = trials;
  const auto cells = l.cfg.grid();

  int agree = 0, attributable = 0, total = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int t = 0; t < l.cfg.trials; ++t) {
      auto sim = l.cfg.simulation(cells[c], harness::trial_seed(l.seed, c, t));
      sim.record_steps = true;
      sim.record_events = false;
      const auto res = harness::run_simulation(sim);
      const auto cmp = harness::compare_with_oracle(res, cells[c].r, pitch, substeps);
      ++total;
      agree += cmp.agree;
      attributable += cmp.attributable;
      std::cout << nlohmann::json{{"cell", c},
                                  {"trial", t},
                                  {"steps", cmp.steps},
                                  {"agree", cmp.agree},
                                  {"disagreeing_steps", cmp.disagreeing_steps},
                                  {"feature_diameter", cmp.feature_diameter},
                                  {"attributable", cmp.attributable},
                                  {"t_max", t_max_json(res.t_max)}}
                       .dump()
                << '\n';
    }
  }
  std::cout << nlohmann::json{{"trials", total},
                              {"agreeing", agree},
                              {"attributable", attributable},
                              {"pitch", pitch},
                              {"seed", l.seed}}
                   .dump()
            << '\n';
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Configuration JSON file")->required();
  sub->add_option("--set", c.overrides, "Override a configuration key, e.g. --set model.sigma=0.3");
  sub->add_option("--seed", c.seed, "Base seed (default: from the config, else OS entropy)");
  sub->add_option("--out", c.out_dir, "Output directory (default: $EVASION_OUT_DIR or ./out)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile sensor coverage simulator"};
  app.require_subcommand(1);

  Common simulate_args, sweep_args, oracle_args;
  int sweep_trials = 0, sweep_jobs = 1, oracle_trials = 0, substeps = 1;
  bool sweep_events = false;
  double pitch = 0.0;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  add_common(simulate, simulate_args);

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over the configured grid");
  add_common(sweep, sweep_args);
  sweep->add_option("--trials", sweep_trials, "Trials per cell")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", sweep_jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_flag("--events", sweep_events, "Write per-trial event logs");

  auto* oracle = app.add_subcommand("oracle-check", "Compare the labelling against the grid oracle");
  add_common(oracle, oracle_args);
  oracle->add_option("--trials", oracle_trials, "Trials per cell")->required()->check(CLI::PositiveNumber);
  oracle->add_option("--pitch", pitch, "Grid pitch")->required()->check(CLI::PositiveNumber);
  oracle->add_option("--substeps", substeps, "Interpolated frames between samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", "", e.what(), 2);
  }

  try {
    if (*simulate) return run_simulate(simulate_args);
    if (*sweep) return run_sweep(sweep_args, sweep_trials, sweep_jobs, sweep_events);
    return run_oracle_check(oracle_args, oracle_trials, pitch, substeps);
  } catch (const SchemaError& e) {
    return report_error(e.kind(), e.path(), e.what(), 1);
  } catch (const Error& e) {
    return report_error(e.kind(), "", e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("InternalError", "", e.what(), 1);
  }
}
