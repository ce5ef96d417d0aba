#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <string>

#include "kamlab/config.hpp"

using namespace kamlab;
using nlohmann::json;

namespace {

json minimal_doc() {
  return json::parse(R"({
    "chart": {"k": 1, "n": 2, "V_box": [[-2, 2]], "W_box": [[-1, 1], [-1, 1]]},
    "hamiltonian": {
      "base": [{"coeff": 0.5, "i_pow": [2]}],
      "perturbation": [{"coeff": -1.0, "wave": [1]}],
      "epsilon": 0.01
    }
  })");
}

}  // namespace

TEST_CASE("minimal document parses with defaults filled in") {
  const SystemConfig cfg = parse_config_json(minimal_doc());
  CHECK(cfg.chart.k == 1);
  CHECK(cfg.chart.n == 2);
  CHECK(cfg.chart.zdim() == 2);
  CHECK(cfg.hamiltonian.epsilon() == 0.01);
  // omitted form defaults to the canonical constant pairing dz1 ^ dz2
  PhasePoint x{{0.5}, {0.1, 0.2}, {1.0}};
  CHECK(cfg.form.matrix_at(x)(1, 2) == 1.0);
  // omitted exponent arrays default to zero; phase defaults to zero
  CHECK(cfg.hamiltonian.base().terms()[0].wave == std::vector<int>{0});
  CHECK(cfg.hamiltonian.perturbation().terms()[0].phase == 0.0);
  // integrator and analysis defaults
  CHECK(cfg.integrator.method == Method::splitting2);
  CHECK(cfg.analysis.T_total == 2000.0);
  CHECK(cfg.analysis.tolerances.tol_torus == 1e-5);
  CHECK(cfg.analysis.diophantine.tau == 1.0);  // defaults to k
  CHECK(cfg.seed == 0);
}

TEST_CASE("errors name the offending JSON path") {
  json doc = minimal_doc();
  doc["hamiltonian"]["base"][0]["wave"] = {1, 2};  // k = 1 expects length 1
  try {
    parse_config_json(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("hamiltonian.base[0].wave") != std::string::npos);
    CHECK(msg.find("length 2, expected 1") != std::string::npos);
  }

  doc = minimal_doc();
  doc.erase("hamiltonian");
  CHECK_THROWS_WITH_AS(parse_config_json(doc), doctest::Contains("$.hamiltonian"), ConfigError);

  doc = minimal_doc();
  doc["hamiltonian"]["base"][0]["wave"] = {1};  // base must be action-only
  CHECK_THROWS_WITH_AS(parse_config_json(doc), doctest::Contains("hamiltonian.base"),
                       ConfigError);

  doc = minimal_doc();
  doc["hamiltonian"]["epsilon"] = -0.5;
  CHECK_THROWS_WITH_AS(parse_config_json(doc), doctest::Contains("hamiltonian.epsilon"),
                       ConfigError);

  doc = minimal_doc();
  doc["chart"]["n"] = 0;
  CHECK_THROWS_WITH_AS(parse_config_json(doc), doctest::Contains("chart.n"), ConfigError);

  doc = minimal_doc();
  doc["integrator"] = {{"method", "rk4"}};
  CHECK_THROWS_WITH_AS(parse_config_json(doc), doctest::Contains("integrator.method"),
                       ConfigError);
}

TEST_CASE("form entries parse into the right matrix slots") {
  json doc = minimal_doc();
  doc["form"] = json::parse(R"({
    "zz_block": [{"mu": 0, "nu": 1, "terms": [{"coeff": 1.5}]}],
    "Iz_block": [{"i": 0, "mu": 0, "terms": [{"coeff": 0.3}]}]
  })");
  const SystemConfig cfg = parse_config_json(doc);
  PhasePoint x{{0.5}, {0.1, 0.2}, {1.0}};
  const auto M = cfg.form.matrix_at(x);
  CHECK(M(1, 2) == 1.5);
  CHECK(M(0, 1) == 0.3);
  CHECK(M(0, 2) == 0.0);

  doc["form"]["zz_block"][0]["nu"] = 0;  // mu >= nu is rejected
  CHECK_THROWS_WITH_AS(parse_config_json(doc), doctest::Contains("form.zz_block[0]"),
                       ConfigError);
}

TEST_CASE("serialization round-trips to an equivalent configuration") {
  json doc = minimal_doc();
  doc["form"] = json::parse(R"({
    "zz_block": [{"mu": 0, "nu": 1, "terms": [{"coeff": 1.5}]}],
    "Iz_block": [{"i": 0, "mu": 1, "terms": [{"coeff": -0.2}]}]
  })");
  doc["integrator"] = {{"method", "midpoint"}, {"step", 0.02}, {"steps", 500}};
  doc["seed"] = 42;
  const SystemConfig a = parse_config_json(doc);
  const SystemConfig b = parse_config_json(config_to_json(a));
  CHECK(config_to_json(a) == config_to_json(b));
  CHECK(b.integrator.method == Method::midpoint);
  CHECK(b.integrator.step == 0.02);
  CHECK(b.seed == 42);
  PhasePoint x{{0.5}, {0.1, 0.2}, {1.0}};
  CHECK(a.form.matrix_at(x) == b.form.matrix_at(x));
  CHECK(a.hamiltonian.value(x) == b.hamiltonian.value(x));
}

TEST_CASE("reduced_config_json emits a classical-chart system in the same schema") {
  const SystemConfig cfg = parse_config_json(minimal_doc());
  const json red = reduced_config_json(cfg, Section{{0.25, -0.5}});
  CHECK(red["chart"]["k"] == 1);
  CHECK(red["chart"]["n"] == 1);
  const SystemConfig back = parse_config_json(red);
  CHECK(back.chart.zdim() == 0);
  PhasePoint y{{0.7}, {}, {0.9}};
  PhasePoint x{{0.7}, {0.25, -0.5}, {0.9}};
  CHECK(back.hamiltonian.value(y) == cfg.hamiltonian.value(x));
  // reduction off the section is rejected
  CHECK_THROWS_AS(reduced_config_json(cfg, Section{{5.0, 0.0}}), std::domain_error);
}

TEST_CASE("parse_config reports unreadable files and bad JSON") {
  CHECK_THROWS_WITH_AS(parse_config("/nonexistent/path.json"), doctest::Contains("cannot open"),
                       ConfigError);
}
