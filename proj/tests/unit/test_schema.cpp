#include <doctest.h>

#include "frc/error.hpp"
#include "frc/random.hpp"
#include "frc/schema.hpp"
#include "oracles.hpp"

using nlohmann::json;

namespace {

json schema_doc() {
  return json{{"year", 2019},
              {"indicators",
               {{"TraditionalLow", {{{"field", "cargoPoints"}, {"weight", 1}}}},
                {"TraditionalHigh", {{{"field", "rocketPoints"}, {"weight", 1}}}},
                {"Technical", {{{"field", "hatchPanelPoints"}, {"weight", 1}}}},
                {"Autonomous", {{{"field", "sandStormBonusPoints"}, {"weight", 1}}}},
                {"Endgame", {{{"field", "habClimbPoints"}, {"weight", 1}}}}}},
              {"foul_field", "foulPoints"}};
}

std::string subject_of(const std::string& text) {
  try {
    frc::parse_year_schema(std::string_view(text));
  } catch (const frc::SchemaError& e) {
    return e.subject();
  }
  return "<no error>";
}

frc::MatchRecord match(double red_cargo, double blue_cargo, int red_total, int blue_total) {
  frc::MatchRecord m;
  m.match_key = "2019tst_qm1";
  m.event_key = "2019tst";
  m.year = 2019;
  m.red_teams = {"1", "2", "3"};
  m.blue_teams = {"4", "5", "6"};
  for (auto* b : {&m.red_breakdown, &m.blue_breakdown}) {
    (*b)["rocketPoints"] = 0;
    (*b)["hatchPanelPoints"] = 0;
    (*b)["sandStormBonusPoints"] = 0;
    (*b)["habClimbPoints"] = 0;
    (*b)["foulPoints"] = 0;
  }
  m.red_breakdown["cargoPoints"] = red_cargo;
  m.blue_breakdown["cargoPoints"] = blue_cargo;
  m.red_total = red_total;
  m.blue_total = blue_total;
  m.winner = frc::winner_from_totals(red_total, blue_total);
  return m;
}

}  // namespace

TEST_SUITE("schema") {
  TEST_CASE("cargo maps onto TraditionalLow with one term") {
    const auto s = frc::parse_year_schema(schema_doc());
    CHECK(s.year == 2019);
    REQUIRE(s.terms_for(frc::Indicator::TraditionalLow).size() == 1);
    CHECK(s.terms_for(frc::Indicator::TraditionalLow)[0] == frc::SchemaTerm{"cargoPoints", 1.0});
    CHECK(s.foul_field == "foulPoints");
  }

  TEST_CASE("missing Endgame mapping is rejected") {
    json d = schema_doc();
    d["indicators"].erase("Endgame");
    CHECK(subject_of(d.dump()) == "Endgame");
  }

  TEST_CASE("non-numeric or non-finite weights are rejected") {
    json d = schema_doc();
    d["indicators"]["Technical"][0]["weight"] = "NaN";
    CHECK(subject_of(d.dump()) == "Technical");
    // 1e999 overflows; the JSON parser rejects it before weights are read.
    std::string text = schema_doc().dump();
    const std::string from = R"({"field":"habClimbPoints","weight":1})";
    text.replace(text.find(from), from.size(), R"({"field":"habClimbPoints","weight":1e999})");
    CHECK(subject_of(text) == "document");
  }

  TEST_CASE("duplicate indicator entries are rejected") {
    const std::string text = R"({"year": 2019, "foul_field": "foulPoints", "indicators": {
      "TraditionalLow": [{"field": "a", "weight": 1}],
      "TraditionalLow": [{"field": "b", "weight": 1}],
      "TraditionalHigh": [{"field": "c", "weight": 1}],
      "Technical": [{"field": "d", "weight": 1}],
      "Autonomous": [{"field": "e", "weight": 1}],
      "Endgame": [{"field": "f", "weight": 1}]}})";
    CHECK(subject_of(text) == "TraditionalLow");
  }

  TEST_CASE("other malformed configs") {
    json d = schema_doc();
    d["indicators"]["Teleop"] = json::array({{{"field", "x"}, {"weight", 1}}});
    CHECK(subject_of(d.dump()) == "Teleop");

    d = schema_doc();
    d["indicators"]["Technical"] = json::array();
    CHECK(subject_of(d.dump()) == "Technical");

    d = schema_doc();
    d["indicators"]["Autonomous"][0]["weight"] = -1;
    CHECK(subject_of(d.dump()) == "Autonomous");

    d = schema_doc();
    d["indicators"]["Defense"] = json::array({{{"field", "x"}, {"weight", 1}}});
    CHECK(subject_of(d.dump()) == "Defense");

    d = schema_doc();
    d.erase("foul_field");
    CHECK(subject_of(d.dump()) == "foul_field");

    CHECK_THROWS_AS(frc::parse_year_schema(std::string_view("[1, 2")), frc::SchemaError);
  }

  TEST_CASE("shipped season schemas load") {
    for (int year : {2017, 2018, 2019}) {
      const auto s = frc::load_year_schema(std::filesystem::path(FRC_SCHEMA_DIR) / (std::to_string(year) + ".json"));
      CHECK(s.year == year);
      CHECK(frc::parse_year_schema(frc::to_json(s)) == s);
    }
  }

  TEST_CASE("schema fields exist in the 2019 fixture") {
    const auto s = frc::load_year_schema(std::filesystem::path(FRC_SCHEMA_DIR) / "2019.json");
    CHECK_NOTHROW(frc::check_schema_fields(s, frc::load_event(oracle::fixture("events/2019tst"))));
    auto m = match(1, 1, 1, 1);
    CHECK_THROWS_AS(frc::check_schema_fields(s, m), frc::SchemaError);
  }

  TEST_CASE("Defense is minus the opponent total") {
    const auto s = frc::parse_year_schema(schema_doc());
    const auto m = match(10, 5, 40, 60);
    CHECK(frc::score_alliance(m, frc::Side::Red, s)[frc::Indicator::Defense] == -60.0);
    CHECK(frc::score_alliance(m, frc::Side::Blue, s)[frc::Indicator::Defense] == -40.0);
  }

  TEST_CASE("zero breakdown gives zero positive components") {
    const auto s = frc::parse_year_schema(schema_doc());
    const auto v = frc::score_alliance(match(0, 0, 0, 0), frc::Side::Red, s);
    for (std::size_t k = 0; k < frc::kPositiveIndicatorCount; ++k) CHECK(v[k] == 0.0);
  }

  TEST_CASE("weighted two-term sum") {
    json d = schema_doc();
    d["indicators"]["TraditionalLow"] = json::array({{{"field", "a"}, {"weight", 2}}, {{"field", "b"}, {"weight", 3}}});
    const auto s = frc::parse_year_schema(d);
    auto m = match(0, 0, 0, 0);
    for (auto* b : {&m.red_breakdown, &m.blue_breakdown}) {
      (*b)["a"] = 0;
      (*b)["b"] = 0;
    }
    m.red_breakdown["a"] = 4;
    m.red_breakdown["b"] = 1;
    // 2 * 4 + 3 * 1
    CHECK(frc::score_alliance(m, frc::Side::Red, s)[frc::Indicator::TraditionalLow] == 11.0);
  }

  TEST_CASE("Fouls is minus the opponent's foul points") {
    const auto s = frc::parse_year_schema(schema_doc());
    auto m = match(0, 0, 10, 10);
    m.blue_breakdown["foulPoints"] = 15;
    CHECK(frc::score_alliance(m, frc::Side::Red, s)[frc::Indicator::Fouls] == -15.0);
    CHECK(frc::score_alliance(m, frc::Side::Blue, s)[frc::Indicator::Fouls] == 0.0);
    CHECK_FALSE(std::signbit(frc::score_alliance(m, frc::Side::Blue, s)[frc::Indicator::Fouls]));
  }

  TEST_CASE("missing field and year mismatch") {
    const auto s = frc::parse_year_schema(schema_doc());
    auto m = match(1, 1, 1, 1);
    m.red_breakdown.erase("habClimbPoints");
    try {
      frc::score_alliance(m, frc::Side::Red, s);
      FAIL("expected MissingFieldError");
    } catch (const frc::MissingFieldError& e) {
      CHECK(e.field() == "habClimbPoints");
      CHECK(e.match_key() == "2019tst_qm1");
    }
    auto other = match(1, 1, 1, 1);
    other.year = 2018;
    CHECK_THROWS_AS(frc::score_alliance(other, frc::Side::Red, s), frc::YearMismatchError);
  }

  TEST_CASE("linearity and Defense antisymmetry") {
    const auto s = frc::parse_year_schema(schema_doc());
    frc::Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
      auto m = match(0, 0, static_cast<int>(rng.below(100)), static_cast<int>(rng.below(100)));
      for (auto* b : {&m.red_breakdown, &m.blue_breakdown}) {
        for (auto& [name, value] : *b) value = static_cast<double>(rng.below(40));
      }
      auto doubled = m;
      for (auto* b : {&doubled.red_breakdown, &doubled.blue_breakdown}) {
        for (auto& [name, value] : *b) value *= 2;
      }
      const auto v = frc::score_alliance(m, frc::Side::Red, s);
      const auto w = frc::score_alliance(doubled, frc::Side::Red, s);
      for (std::size_t k = 0; k < frc::kPositiveIndicatorCount; ++k) CHECK(w[k] == 2 * v[k]);
      CHECK(w[frc::Indicator::Defense] == v[frc::Indicator::Defense]);
      CHECK(v[frc::Indicator::Defense] == -m.blue_total);
      CHECK(frc::score_alliance(m, frc::Side::Blue, s)[frc::Indicator::Defense] == -m.red_total);
    }
  }
}
