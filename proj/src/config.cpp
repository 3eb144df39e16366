#include "mcov/config.hpp"

#include <fstream>
#include <set>

namespace mcov::config {
namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

double get_positive(const json& j, const std::string& path) {
  const double x = get_number(j, path);
  if (!(x > 0.0)) throw RangeError(path + " must be positive");
  return x;
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw SchemaError(path + "/" + key, "unknown key");
  }
}

motion::ModelParams parse_model(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw SchemaError(path + "/kind", "expected a string");
  const std::string kind = j["kind"].get<std::string>();
  auto field = [&](const char* key, double fallback) {
    return j.contains(key) ? get_positive(j[key], path + "/" + key) : fallback;
  };
  if (kind == "brownian") {
    reject_unknown(j, {"kind", "sigma"}, path);
    motion::BrownianParams p;
    p.sigma = field("sigma", p.sigma);
    return p;
  }
  if (kind == "billiard") {
    reject_unknown(j, {"kind", "speed"}, path);
    motion::BilliardParams p;
    p.speed = field("speed", p.speed);
    return p;
  }
  if (kind == "dorsogna") {
    reject_unknown(j, {"kind", "alpha", "beta", "ca", "cr", "la", "lr", "mass"}, path);
    motion::DOrsognaParams p;
    p.alpha = field("alpha", p.alpha);
    p.beta = field("beta", p.beta);
    p.ca = field("ca", p.ca);
    p.cr = field("cr", p.cr);
    p.la = field("la", p.la);
    p.lr = field("lr", p.lr);
    p.mass = field("mass", p.mass);
    return p;
  }
  throw SchemaError(path + "/kind", "unknown model kind \"" + kind + "\"");
}

template <class T, class Get>
std::vector<T> scalar_or_list(const json& j, const std::string& path, Get get) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) throw SchemaError(path, "list must not be empty");
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get(j[i], path + "/" + std::to_string(i)));
  } else {
    out.push_back(get(j, path));
  }
  return out;
}

}  // namespace

std::vector<harness::Cell> RunConfig::grid() const {
  std::vector<harness::Cell> cells;
  for (const auto& m : models) {
    for (int n : N) {
      for (double radius : r) cells.push_back({n, radius, m});
    }
  }
  return cells;
}

harness::SimulationConfig RunConfig::simulation(const harness::Cell& cell, std::uint64_t run_seed) const {
  harness::SimulationConfig sim;
  sim.N = cell.N;
  sim.r = cell.r;
  sim.model = cell.model;
  sim.dt_base = dt;
  sim.dt_min = effective_dt_min();
  sim.t_cap = t_cap;
  sim.seed = run_seed;
  sim.mode = mode;
  return sim;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw SchemaError("", "override \"" + std::string(assignment) + "\" is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw SchemaError("/" + key, "empty key segment in override");
    if (!node->is_object()) *node = json::object();
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

RunConfig parse_config(json doc, std::span<const std::string> overrides) {
  if (!doc.is_object()) throw SchemaError("", "configuration must be a JSON object");
  for (const auto& o : overrides) apply_override(doc, o);
  reject_unknown(doc, {"schema_version", "model", "N", "r", "dt", "dt_min", "t_cap", "trials", "mode", "seed"},
                 "");

  RunConfig c;
  if (doc.contains("schema_version")) {
    c.schema_version = get_int(doc["schema_version"], "/schema_version");
    if (c.schema_version != kSchemaVersion) {
      throw SchemaError("/schema_version", "unsupported schema version " + std::to_string(c.schema_version));
    }
  }
  if (!doc.contains("model")) throw SchemaError("/model", "missing required key");
  if (!doc.contains("N")) throw SchemaError("/N", "missing required key");
  if (!doc.contains("r")) throw SchemaError("/r", "missing required key");

  c.models = scalar_or_list<motion::ModelParams>(doc["model"], "/model", parse_model);
  c.N = scalar_or_list<int>(doc["N"], "/N", [](const json& j, const std::string& path) {
    const int n = get_int(j, path);
    if (n < 0) throw RangeError(path + " must be non-negative");
    return n;
  });
  c.r = scalar_or_list<double>(doc["r"], "/r", [](const json& j, const std::string& path) {
    const double x = get_number(j, path);
    if (!(x > 0.0 && x < 0.5)) throw RangeError(path + " = " + j.dump() + " is outside (0, 0.5)");
    return x;
  });
  if (doc.contains("dt")) c.dt = get_positive(doc["dt"], "/dt");
  if (doc.contains("dt_min")) c.dt_min = get_positive(doc["dt_min"], "/dt_min");
  if (doc.contains("t_cap")) c.t_cap = get_positive(doc["t_cap"], "/t_cap");
  if (doc.contains("trials")) {
    c.trials = get_int(doc["trials"], "/trials");
    if (c.trials < 1) throw RangeError("/trials must be at least 1");
  }
  if (doc.contains("mode")) {
    const auto& m = doc["mode"];
    const auto mode = m.is_string() ? evasion::mode_from_string(m.get<std::string>()) : std::nullopt;
    if (!mode) throw SchemaError("/mode", "expected \"connected\" or \"power_down\"");
    c.mode = *mode;
  }
  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (!s.is_number_integer()) throw SchemaError("/seed", "expected a non-negative integer");
    if (s.is_number_unsigned()) {
      c.seed = s.get<std::uint64_t>();
    } else {
      const auto v = s.get<std::int64_t>();
      if (v < 0) throw SchemaError("/seed", "expected a non-negative integer");
      c.seed = static_cast<std::uint64_t>(v);
    }
  }
  if (c.effective_dt_min() >= c.dt) throw RangeError("/dt_min must be smaller than /dt");
  if (c.dt > c.t_cap) throw RangeError("/dt must not exceed /t_cap");
  return c;
}

RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("", path.string() + " is not valid JSON");
  return parse_config(std::move(doc), overrides);
}

json model_to_json(const motion::ModelParams& model) {
  struct Visitor {
    json operator()(const motion::BrownianParams& p) const { return {{"kind", "brownian"}, {"sigma", p.sigma}}; }
    json operator()(const motion::BilliardParams& p) const { return {{"kind", "billiard"}, {"speed", p.speed}}; }
    json operator()(const motion::DOrsognaParams& p) const {
      return {{"kind", "dorsogna"}, {"alpha", p.alpha}, {"beta", p.beta}, {"ca", p.ca}, {"cr", p.cr},
              {"la", p.la},         {"lr", p.lr},       {"mass", p.mass}};
    }
  };
  return std::visit(Visitor{}, model);
}

json to_json(const RunConfig& c) {
  json models = json::array();
  for (const auto& m : c.models) models.push_back(model_to_json(m));
  json doc{{"schema_version", c.schema_version},
           {"model", c.models.size() == 1 ? models[0] : models},
           {"N", c.N.size() == 1 ? json(c.N[0]) : json(c.N)},
           {"r", c.r.size() == 1 ? json(c.r[0]) : json(c.r)},
           {"dt", c.dt},
           {"t_cap", c.t_cap},
           {"trials", c.trials},
           {"mode", std::string(evasion::to_string(c.mode))}};
  if (c.dt_min) doc["dt_min"] = *c.dt_min;
  if (c.seed) doc["seed"] = *c.seed;
  return doc;
}

}  // namespace mcov::config
