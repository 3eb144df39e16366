#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mcov/config.hpp"

using namespace mcov;
using namespace mcov::config;
using nlohmann::json;

namespace {

const json kMinimal = json::parse(R"({"model":{"kind":"brownian"},"N":15,"r":0.12})");

std::string schema_path(const json& doc, std::vector<std::string> overrides = {}) {
  try {
    parse_config(doc, overrides);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("minimal configuration takes the defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.schema_version == 1);
  REQUIRE(c.models.size() == 1);
  CHECK(std::get<motion::BrownianParams>(c.models[0]).sigma == 0.5);
  CHECK(c.N == std::vector<int>{15});
  CHECK(c.r == std::vector<double>{0.12});
  CHECK(c.dt == 0.01);
  CHECK(c.effective_dt_min() == doctest::Approx(0.01 / 1048576.0));
  CHECK(c.t_cap == 50.0);
  CHECK(c.trials == 1);
  CHECK(c.mode == evasion::Mode::Connected);
  CHECK_FALSE(c.seed.has_value());

  const auto sim = c.simulation(c.grid()[0], 7);
  CHECK(sim.N == 15);
  CHECK(sim.r == 0.12);
  CHECK(sim.seed == 7);
  CHECK(sim.t_cap == 50.0);
}

TEST_CASE("D'Orsogna defaults") {
  const auto c = parse_config(json::parse(R"({"model":{"kind":"dorsogna"},"N":5,"r":0.1})"));
  const auto& p = std::get<motion::DOrsognaParams>(c.models[0]);
  CHECK(p.alpha == 1.0);
  CHECK(p.beta == 1.0);
  CHECK(p.ca == 0.45);
  CHECK(p.cr == 0.5);
  CHECK(p.la == 1.0);
  CHECK(p.lr == 0.1);
  CHECK(p.mass == 1.0);
}

TEST_CASE("overrides") {
  const std::vector<std::string> bad{"r=0.7"};
  CHECK_THROWS_AS(parse_config(kMinimal, bad), RangeError);

  const std::vector<std::string> ok{"model.sigma=0.25", "trials=4", "mode=power_down", "seed=9"};
  const auto c = parse_config(kMinimal, ok);
  CHECK(std::get<motion::BrownianParams>(c.models[0]).sigma == 0.25);
  CHECK(c.trials == 4);
  CHECK(c.mode == evasion::Mode::PowerDown);
  CHECK(c.seed == 9u);

  json doc = kMinimal;
  apply_override(doc, "N=[10,20]");
  CHECK(doc["N"] == json::array({10, 20}));
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), SchemaError);
}

TEST_CASE("list-valued fields form a grid") {
  const auto c = parse_config(json::parse(
      R"({"model":[{"kind":"brownian"},{"kind":"billiard"}],"N":[10,15,20],"r":[0.1,0.12,0.15]})"));
  const auto g = c.grid();
  REQUIRE(g.size() == 18);
  CHECK(g[0].N == 10);
  CHECK(g[0].r == 0.1);
  CHECK(g[1].r == 0.12);
  CHECK(g[3].N == 15);
  CHECK(std::holds_alternative<motion::BrownianParams>(g[8].model));
  CHECK(std::holds_alternative<motion::BilliardParams>(g[9].model));
}

TEST_CASE("round trip through JSON") {
  const std::vector<std::string> o{"dt_min=0.0001", "seed=3", "t_cap=20"};
  const auto c = parse_config(json::parse(R"({"model":[{"kind":"dorsogna","beta":0.5},{"kind":"billiard"}],
                                              "N":[4,8],"r":0.2})"),
                              o);
  CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("schema errors carry a path") {
  CHECK(schema_path(json::parse(R"({"model":{"kind":"brownian"},"N":15,"r":0.12,"colour":1})")) == "/colour");
  CHECK(schema_path(json::parse(R"({"model":{"kind":"brownian","speed":1},"N":15,"r":0.12})")) == "/model/speed");
  CHECK(schema_path(json::parse(R"({"model":{"kind":"levy"},"N":15,"r":0.12})")) == "/model/kind");
  CHECK(schema_path(json::parse(R"({"model":{"kind":"brownian"},"r":0.12})")) == "/N");
  CHECK(schema_path(json::parse(R"({"N":1,"r":0.12})")) == "/model");
  CHECK(schema_path(json::parse(R"({"model":{"kind":"brownian"},"N":[1,"x"],"r":0.12})")) == "/N/1");
  CHECK(schema_path(json::parse(R"({"model":{"kind":"brownian"},"N":1,"r":0.1,"mode":"off"})")) == "/mode");
  CHECK(schema_path(json::parse(R"({"model":{"kind":"brownian"},"N":1,"r":0.1,"schema_version":2})")) ==
        "/schema_version");
  CHECK(schema_path(json::parse(R"({"model":{"kind":"brownian"},"N":1,"r":0.1,"seed":-1})")) == "/seed");
  CHECK(schema_path(json::parse("[1,2]")) == "");
}

TEST_CASE("range errors") {
  const auto with = [](const char* extra) {
    return json::parse(std::string(R"({"model":{"kind":"brownian"},"N":5,"r":0.1)") + extra + "}");
  };
  CHECK_THROWS_AS(parse_config(with(R"(,"dt":0)")), RangeError);
  CHECK_THROWS_AS(parse_config(with(R"(,"dt":1,"t_cap":0.5)")), RangeError);
  CHECK_THROWS_AS(parse_config(with(R"(,"dt_min":0.02)")), RangeError);
  CHECK_THROWS_AS(parse_config(with(R"(,"trials":0)")), RangeError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"model":{"kind":"brownian"},"N":-1,"r":0.1})")), RangeError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"model":{"kind":"brownian","sigma":0},"N":1,"r":0.1})")),
                  RangeError);
}

TEST_CASE("loading from disk") {
  const auto path = std::filesystem::temp_directory_path() / "mcov_test_config.json";
  std::ofstream(path) << kMinimal.dump();
  CHECK(load_config(path) == parse_config(kMinimal));
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_config(path), SchemaError);
  CHECK_THROWS_AS(load_config(path.string() + ".missing"), IoError);
}
