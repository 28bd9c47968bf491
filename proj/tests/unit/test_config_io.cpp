#include <fstream>

#include "ratelab/config_io.hpp"
#include "ratelab/errors.hpp"
#include "support.hpp"

using namespace ratelab;
using nlohmann::json;
using testing::d;

namespace {

json minimal() {
  return json::parse(R"({
    "scenario": {"segments": [{"kind": "hold", "duration": 3, "value": "0.5"}]},
    "strategies": [{"name": "p", "kind": "pid", "m": "3", "n": "5.5"}]
  })");
}

std::string rejection(const json& j) {
  try {
    run_config_from_json(j);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "accepted";
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const RunConfig c = run_config_from_json(minimal());
  CHECK(c.backend == Backend::fixed);
  CHECK(c.band == d("0.02"));
  CHECK(c.scenario.dt == 3600);
  CHECK(c.scenario.seed == 0);
  REQUIRE(c.strategies.size() == 1);
  const auto& pid = std::get<PidConfig>(c.strategies[0].config);
  CHECK(pid.u_optimal == d("0.5"));
  CHECK(pid.k_p == Decimal::one());
  CHECK(pid.derivative_enabled);
  CHECK_FALSE(c.trace_path);
}

TEST_CASE("unknown keys are rejected with their path") {
  json j = minimal();
  j["colour"] = "blue";
  CHECK(rejection(j).find("colour") != std::string::npos);

  j = minimal();
  j["strategies"][0]["k_q"] = "1";
  CHECK(rejection(j).find("strategies.p") != std::string::npos);
  CHECK(rejection(j).find("k_q") != std::string::npos);

  j = minimal();
  j["scenario"]["segments"][0]["slope"] = "1";
  CHECK(rejection(j).find("scenario.segments[0]") != std::string::npos);

  j = minimal();
  j["output"] = json{{"svg", "x.svg"}};
  CHECK(rejection(j).find("config.output") != std::string::npos);
}

TEST_CASE("decimals must travel as strings") {
  json j = minimal();
  j["strategies"][0]["m"] = 3.0;
  CHECK(rejection(j).find("strategies.p.m") != std::string::npos);
  j = minimal();
  j["band"] = 0.02;
  CHECK(rejection(j) != "accepted");
  j = minimal();
  j["strategies"][0]["m"] = "3.0000000000000000001";
  CHECK(rejection(j) != "accepted");
  j = minimal();
  j["scenario"]["dt"] = "3600";
  CHECK(rejection(j).find("scenario.dt") != std::string::npos);
}

TEST_CASE("PID shape comes from n or from an anchor rate") {
  json j = minimal();
  j["strategies"][0].erase("n");
  CHECK(rejection(j).find("exactly one") != std::string::npos);
  j["strategies"][0]["r_o"] = "0.375";
  const RunConfig c = run_config_from_json(j);
  const auto& pid = std::get<PidConfig>(c.strategies[0].config);
  CHECK(abs(pid.n - d("3")) <= d("0.000000000000001"));
  j["strategies"][0]["n"] = "3";
  CHECK(rejection(j).find("exactly one") != std::string::npos);
  j["strategies"][0].erase("n");
  j["strategies"][0]["r_o"] = "4";
  CHECK(rejection(j).find("r_o") != std::string::npos);
}

TEST_CASE("structural rules") {
  json j = minimal();
  j["strategies"].push_back(j["strategies"][0]);
  CHECK(rejection(j).find("duplicate") != std::string::npos);

  j = minimal();
  j["strategies"] = json::array();
  CHECK(rejection(j) != "accepted");

  j = minimal();
  j["strategies"].push_back({{"name", "a"}, {"kind", "aave"}, {"base_rate", "0"}, {"slope1", "0.04"},
                             {"slope2", "2.92"}, {"u_kink", "0.45"}});
  j["scenario"]["feedback"] = {{"elasticity", "0.1"}, {"reference_rate", "0.2"}};
  CHECK(rejection(j).find("exactly one strategy") != std::string::npos);

  j = minimal();
  j["strategies"][0]["kind"] = "compound";
  CHECK(rejection(j).find("compound") != std::string::npos);

  j = minimal();
  j["strategies"][0]["name"] = "bad name,with comma";
  CHECK(rejection(j) != "accepted");

  j = minimal();
  j["backend"] = "gpu";
  CHECK(rejection(j) != "accepted");

  j = minimal();
  j["scenario"]["segments"][0]["kind"] = "sine";
  CHECK(rejection(j).find("sine") != std::string::npos);
}

TEST_CASE("every strategy kind round trips through JSON") {
  const json j = json::parse(R"({
    "backend": "reference",
    "band": "0.05",
    "output": {"trace": "out.csv", "metrics": "out.json"},
    "scenario": {
      "dt": 600, "seed": 12345678901234,
      "segments": [
        {"kind": "linear-ramp", "duration": 5, "start": "0.1", "end": "0.9"},
        {"kind": "hold", "duration": 2},
        {"kind": "step", "duration": 2, "size": "-0.2"},
        {"kind": "random-walk", "duration": 4, "volatility": "0.01"}
      ]
    },
    "strategies": [
      {"name": "pid", "kind": "pid", "k_p": "1.1", "k_i": "0.00000325", "k_d": "0.1",
       "u_optimal": "0.6", "m": "3", "n": "5.5", "derivative_period": 7200, "derivative_enabled": false},
      {"name": "aave", "kind": "aave", "base_rate": "0", "slope1": "0.04", "slope2": "2.92", "u_kink": "0.45"},
      {"name": "ajna", "kind": "ajna", "target_utilization": "0.5", "initial_rate": "0.1", "epoch_seconds": 43200},
      {"name": "morpho", "kind": "morpho", "k_p": "0.0000015", "u_target": "0.9", "initial_rate_at_target": "0.04"}
    ]
  })");
  const RunConfig c = run_config_from_json(j);
  CHECK(c.backend == Backend::reference);
  CHECK(c.scenario.seed == 12345678901234ULL);
  CHECK(*c.trace_path == "out.csv");
  const RunConfig again = run_config_from_json(to_json(c));
  CHECK(to_json(again) == to_json(c));
  CHECK(again.strategies.size() == 4);
}

TEST_CASE("missing files and broken JSON") {
  CHECK_THROWS_AS(load_run_config(testing::source_dir() / "configs" / "nope.json"), ConfigNotFound);
  try {
    load_run_config("/definitely/not/here.json");
  } catch (const ConfigNotFound& e) {
    CHECK(std::string(e.what()).find("config not found") != std::string::npos);
  }
  testing::ScratchDir dir;
  std::ofstream(dir / "broken.json") << "{\"scenario\": ";
  CHECK_THROWS_AS(load_run_config(dir / "broken.json"), ValidationError);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"fig4", "fig5", "fig6_ramp50", "fig6_ramp90", "baselines", "feedback"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_run_config(testing::source_dir() / "configs" / (std::string(name) + ".json")));
  }
}
