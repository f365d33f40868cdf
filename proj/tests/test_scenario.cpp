#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lenspec/errors.hpp"
#include "lenspec/scenario.hpp"
#include "lenspec/spaces.hpp"

using namespace lenspec;

namespace {

const char* kMinimal = R"({
  "rank": 2,
  "generating_sets": [{"name": "std", "standard": true}],
  "models": [
    {"name": "unit", "kind": "tree"},
    {"name": "weighted", "kind": "tree", "weights": [1, 2]}
  ],
  "verifiers": [{"name": "thm15", "Xstar": "weighted", "S": "std", "L": [8]}]
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal scenario gets defaults") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.seed == 0);
  CHECK(s.config.K == 1e4);
  CHECK(s.config.c_delta == 4.0);
  CHECK(s.models[0].delta.value() == 0.0);
  CHECK(s.verifiers[0].K == 1e4);
  CHECK(s.verifiers[0].L == std::vector<double>{8.0});
}

TEST_CASE("schema errors name the field") {
  const std::string bad_name = R"({"rank": 2, "verifiers": [{"name": "thm99"}]})";
  CHECK(error_of(bad_name).find("verifiers[0].name") != std::string::npos);
  const std::string bad_type = R"({"rank": 2, "models": [{"name": "t", "kind": "tree", "weights": "x"}]})";
  CHECK(error_of(bad_type).find("models[0].weights") != std::string::npos);
  const std::string unknown = R"({"rank": 2, "colour": 1})";
  CHECK(error_of(unknown).find("colour") != std::string::npos);
  const std::string dangling = R"({"rank": 2, "verifiers": [{"name": "lemma25", "model": "nope"}]})";
  CHECK(error_of(dangling).find("verifiers[0].model") != std::string::npos);
  const std::string syntax = "{\n  \"rank\": 2,\n  \"models\": [}\n";
  CHECK(error_of(syntax).find("line 3") != std::string::npos);
}

TEST_CASE("preset expansion") {
  const auto s = parse_scenario(R"({"rank": 2, "models": [{"name": "h", "preset": "cor17-default"}]})");
  const auto& m = s.models[0];
  CHECK(m.kind == "schottky");
  CHECK(m.stretch == std::vector<double>{4.0});
  CHECK(m.angles == std::vector<double>{0.0, 1.2});
  CHECK(m.delta.value() == doctest::Approx(std::log(4.0)));
  const auto o =
      parse_scenario(R"({"rank": 2, "models": [{"name": "h", "preset": "cor17-default", "stretch": [5]}]})");
  CHECK(o.models[0].stretch == std::vector<double>{5.0});
}

TEST_CASE("round trip") {
  const auto s = parse_scenario(kMinimal);
  CHECK(parse_scenario(emit_scenario(s)) == s);
  for (const auto& entry : std::filesystem::directory_iterator(LENSPEC_SCENARIO_DIR)) {
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    const auto x = parse_scenario(ss.str());
    CHECK_MESSAGE(parse_scenario(emit_scenario(x)) == x, entry.path().string());
  }
}

TEST_CASE("identical actions hold with window sup 1") {
  const auto s = parse_scenario(R"({
    "rank": 2,
    "models": [{"name": "t", "kind": "tree"}],
    "verifiers": [{"name": "thm13", "X": "t", "Xstar": "t", "L": [4, 8]}]
  })");
  const auto r = run_scenario(s);
  REQUIRE(r.outcomes.size() == 1);
  for (const auto& rep : r.outcomes[0].reports) {
    CHECK(rep.verdict == Verdict::holds);
    CHECK(rep.window_sup.lo == 1.0);
    CHECK(rep.window_sup.hi == 1.0);
  }
  CHECK(r.exit_code() == 0);
  CHECK(emit_report_json(r) == emit_report_json(run_scenario(s)));
}

TEST_CASE("errors are captured per verifier") {
  const auto s = parse_scenario(R"({
    "rank": 2,
    "models": [{"name": "t", "kind": "tree"}],
    "verifiers": [
      {"name": "thm13", "X": "t", "Xstar": "t", "L": [2]},
      {"name": "thm13", "X": "t", "Xstar": "t", "L": [4]}
    ]
  })");
  const auto r = run_scenario(s);
  REQUIRE(r.outcomes.size() == 2);
  CHECK(r.outcomes[0].status == "input-error");
  CHECK(r.outcomes[1].status == "ok");
  CHECK(r.exit_code() == 2);
}
