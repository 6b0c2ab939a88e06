#include <doctest.h>

#include <map>

#include "frc/error.hpp"
#include "frc/random.hpp"
#include "frc/schema.hpp"
#include "frc/stats.hpp"
#include "oracles.hpp"

using nlohmann::json;

namespace {

// TraditionalLow <- "low"; the other positive axes read fields kept at 0.
frc::YearSchema simple_schema() {
  frc::YearSchema s;
  s.year = 2019;
  const char* fields[] = {"low", "high", "tech", "auto", "end"};
  for (std::size_t k = 0; k < frc::kPositiveIndicatorCount; ++k) s.terms[k] = {{fields[k], 1.0}};
  s.foul_field = "foul";
  return s;
}

frc::MatchRecord make_match(const std::string& key, frc::AllianceTeams red, frc::AllianceTeams blue,
                            std::map<std::string, double> rb, std::map<std::string, double> bb, int rt, int bt) {
  frc::MatchRecord m;
  m.match_key = key;
  m.event_key = "2019tst";
  m.year = 2019;
  m.red_teams = std::move(red);
  m.blue_teams = std::move(blue);
  for (const char* f : {"low", "high", "tech", "auto", "end", "foul"}) {
    m.red_breakdown[f] = rb.contains(f) ? rb[f] : 0.0;
    m.blue_breakdown[f] = bb.contains(f) ? bb[f] : 0.0;
  }
  m.red_total = rt;
  m.blue_total = bt;
  m.winner = frc::winner_from_totals(rt, bt);
  return m;
}

frc::RawProfileTable table_of(const std::vector<std::array<double, 7>>& rows) {
  frc::RawProfileTable t;
  t.year = 2019;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    frc::RawAggregate a;
    a.match_count = 1;
    a.raw_means.values = rows[i];
    t.teams.emplace(std::to_string(i + 1), a);
  }
  return t;
}

frc::RobotProfile profile(const std::string& id, std::array<double, 7> v) {
  frc::RobotProfile p;
  p.team_id = id;
  p.match_count = 1;
  p.normalized.values = v;
  return p;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("raw mean over a team's matches") {
    frc::EventDataset ds;
    ds.event_key = "2019tst";
    ds.year = 2019;
    ds.matches.push_back(make_match("2019tst_qm1", {"1", "2", "3"}, {"4", "5", "6"}, {{"low", 10}}, {}, 10, 0));
    ds.matches.push_back(make_match("2019tst_qm2", {"1", "7", "8"}, {"9", "5", "6"}, {{"low", 20}}, {}, 20, 0));
    const auto t = frc::aggregate_robot_profiles(std::span(&ds, 1), simple_schema());
    CHECK(t.teams.at("1").match_count == 2);
    CHECK(t.teams.at("1").raw_means[frc::Indicator::TraditionalLow] == 15.0);
    CHECK(t.teams.at("2").raw_means[frc::Indicator::TraditionalLow] == 10.0);
  }

  TEST_CASE("blue-only team gets blue-side vectors") {
    frc::EventDataset ds;
    ds.year = 2019;
    ds.matches.push_back(make_match("2019tst_qm1", {"1", "2", "3"}, {"4", "5", "6"}, {{"low", 10}, {"foul", 4}},
                                    {{"low", 3}, {"foul", 7}}, 30, 12));
    const auto t = frc::aggregate_robot_profiles(std::span(&ds, 1), simple_schema());
    const auto& v = t.teams.at("4").raw_means;
    CHECK(v[frc::Indicator::TraditionalLow] == 3.0);
    CHECK(v[frc::Indicator::Fouls] == -4.0);
    CHECK(v[frc::Indicator::Defense] == -30.0);
  }

  TEST_CASE("6-team 4-match event matches a brute-force recomputation") {
    frc::Rng rng(6);
    frc::EventDataset ds;
    ds.year = 2019;
    const std::vector<std::string> teams{"11", "22", "33", "44", "55", "66"};
    for (int i = 0; i < 4; ++i) {
      std::vector<std::string> order = teams;
      rng.shuffle(std::span(order));
      std::map<std::string, double> rb, bb;
      for (const char* f : {"low", "high", "tech", "auto", "end", "foul"}) {
        rb[f] = static_cast<double>(rng.below(30));
        bb[f] = static_cast<double>(rng.below(30));
      }
      ds.matches.push_back(make_match("2019tst_qm" + std::to_string(i + 1), {order[0], order[1], order[2]},
                                      {order[3], order[4], order[5]}, rb, bb, static_cast<int>(rng.below(90)),
                                      static_cast<int>(rng.below(90))));
    }
    // Brute force: walk every match for every team, straight from the breakdown maps.
    const char* fields[] = {"low", "high", "tech", "auto", "end"};
    const auto t = frc::aggregate_robot_profiles(std::span(&ds, 1), simple_schema());
    for (const auto& team : teams) {
      std::vector<std::array<double, 7>> rows;
      for (const auto& m : ds.matches) {
        for (int side = 0; side < 2; ++side) {
          const auto& mine = side == 0 ? m.red_teams : m.blue_teams;
          if (std::find(mine.begin(), mine.end(), team) == mine.end()) continue;
          const auto& own = side == 0 ? m.red_breakdown : m.blue_breakdown;
          const auto& opp = side == 0 ? m.blue_breakdown : m.red_breakdown;
          std::array<double, 7> row{};
          for (int k = 0; k < 5; ++k) row[k] = own.at(fields[k]);
          row[5] = -opp.at("foul");
          row[6] = -(side == 0 ? m.blue_total : m.red_total);
          rows.push_back(row);
        }
      }
      if (rows.empty()) {
        CHECK_FALSE(t.teams.contains(team));
        continue;
      }
      const auto expect = oracle::mean_of(rows);
      const auto& got = t.teams.at(team);
      CHECK(got.match_count == rows.size());
      for (int k = 0; k < 7; ++k) CHECK(got.raw_means[static_cast<std::size_t>(k)] == doctest::Approx(expect[k]).epsilon(1e-12));
    }
  }

  TEST_CASE("year mismatch") {
    frc::EventDataset ds;
    ds.year = 2018;
    ds.matches.push_back(make_match("2018tst_qm1", {"1", "2", "3"}, {"4", "5", "6"}, {}, {}, 0, 0));
    ds.matches[0].year = 2018;
    CHECK_THROWS_AS(frc::aggregate_robot_profiles(std::span(&ds, 1), simple_schema()), frc::YearMismatchError);
    frc::EventDataset empty;
    empty.year = 2018;
    CHECK(frc::aggregate_robot_profiles(std::span(&empty, 1), simple_schema()).teams.empty());
  }

  TEST_CASE("normalization formula on one positive indicator") {
    const auto set = frc::normalize_profiles(table_of({{4, 0, 0, 0, 0, 0, 0}, {8, 0, 0, 0, 0, 0, 0}, {10, 0, 0, 0, 0, 0, 0}}));
    CHECK(set.profiles.at("1").normalized[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(set.profiles.at("2").normalized[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(set.profiles.at("3").normalized[0] == 1.0);
    CHECK(set.extrema[0] == 10.0);
  }

  TEST_CASE("penalty axes: SCORE_MIN gives 0, zero gives 1") {
    const auto set = frc::normalize_profiles(
        table_of({{1, 1, 1, 1, 1, -12, -60}, {1, 1, 1, 1, 1, 0, 0}, {1, 1, 1, 1, 1, -3, -15}}));
    CHECK(set.profiles.at("1").normalized[frc::Indicator::Defense] == 0.0);
    CHECK(set.profiles.at("1").normalized[frc::Indicator::Fouls] == 0.0);
    CHECK(set.profiles.at("2").normalized[frc::Indicator::Defense] == 1.0);
    CHECK(set.profiles.at("2").normalized[frc::Indicator::Fouls] == 1.0);
    CHECK(set.profiles.at("3").normalized[frc::Indicator::Defense] == doctest::Approx(0.75));
    CHECK(set.extrema[frc::Indicator::Defense] == -60.0);
  }

  TEST_CASE("degenerate denominators") {
    const auto set = frc::normalize_profiles(table_of({{0, 5, 5, 5, 5, 0, -3}, {0, 5, 5, 5, 5, 0, -6}}));
    for (const auto& [id, p] : set.profiles) {
      CHECK(p.normalized[frc::Indicator::TraditionalLow] == 0.0);
      CHECK(p.normalized[frc::Indicator::Fouls] == 1.0);
      CHECK(p.normalized[frc::Indicator::TraditionalHigh] == 1.0);
    }
  }

  TEST_CASE("scale invariance on a positive indicator") {
    frc::Rng rng(8);
    std::vector<std::array<double, 7>> rows(12);
    for (auto& r : rows) {
      for (int k = 0; k < 5; ++k) r[k] = rng.uniform(0, 50);
      r[5] = -rng.uniform(0, 20);
      r[6] = -rng.uniform(0, 90);
    }
    const auto base = frc::normalize_profiles(table_of(rows));
    for (auto& r : rows) r[2] *= 3.5;
    const auto scaled = frc::normalize_profiles(table_of(rows));
    for (const auto& [id, p] : base.profiles) {
      CHECK(scaled.profiles.at(id).normalized[2] == doctest::Approx(p.normalized[2]).epsilon(1e-14));
    }
  }

  TEST_CASE("normalization is deterministic and in range") {
    frc::Rng rng(9);
    std::vector<std::array<double, 7>> rows(30);
    for (auto& r : rows) {
      for (int k = 0; k < 5; ++k) r[k] = rng.uniform(0, 50);
      r[5] = -rng.uniform(0, 20);
      r[6] = -rng.uniform(0, 90);
    }
    const auto a = frc::normalize_profiles(table_of(rows));
    const auto b = frc::normalize_profiles(table_of(rows));
    CHECK(a == b);
    for (const auto& [id, p] : a.profiles) CHECK(p.normalized.is_normalized());
  }

  TEST_CASE("alliance effectiveness") {
    const auto v = profile("1", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
    auto v2 = v, v3 = v;
    v2.team_id = "2";
    v3.team_id = "3";
    const auto same = frc::alliance_effectiveness(v, v2, v3);
    for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(same[k] - v.normalized[k]) < 1e-15);

    const auto a = profile("1", {0, 0, 0, 0, 0, 0, 0});
    const auto b = profile("2", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const auto c = profile("3", {1, 1, 1, 1, 1, 1, 1});
    CHECK(frc::alliance_effectiveness(a, b, c)[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(frc::alliance_effectiveness(a, a, c), frc::DuplicateMemberError);
    const std::vector<const frc::RobotProfile*> none;
    CHECK_THROWS_AS(frc::alliance_effectiveness(none), frc::DomainError);
  }

  TEST_CASE("effectiveness equals brute mean and is permutation invariant") {
    frc::Rng rng(10);
    for (int trial = 0; trial < 300; ++trial) {
      std::array<frc::RobotProfile, 3> p;
      std::vector<std::array<double, 7>> rows;
      for (int i = 0; i < 3; ++i) {
        std::array<double, 7> v{};
        for (auto& x : v) x = rng.uniform();
        p[i] = profile(std::to_string(100 + i), v);
        rows.push_back(v);
      }
      const auto expect = oracle::mean_of(rows);
      const auto e = frc::alliance_effectiveness(p[0], p[1], p[2]);
      for (int k = 0; k < 7; ++k) CHECK(e[static_cast<std::size_t>(k)] == doctest::Approx(expect[k]).epsilon(1e-14));
      CHECK(frc::alliance_effectiveness(p[2], p[0], p[1]) == e);
      CHECK(frc::alliance_effectiveness(p[1], p[2], p[0]) == e);
      CHECK(frc::alliance_effectiveness(p[2], p[1], p[0]) == e);
    }
  }

  TEST_CASE("average alliance is the mean profile") {
    const auto set = frc::normalize_profiles(table_of({{2, 4, 0, 0, 0, -1, -10}, {4, 2, 0, 0, 0, -2, -20}}));
    const auto avg = frc::average_alliance(set);
    CHECK(avg[0] == doctest::Approx(0.75));
    CHECK(avg[frc::Indicator::Defense] == doctest::Approx(0.25));
  }

  TEST_CASE("profiles file round trip") {
    const auto set = frc::normalize_profiles(table_of({{2, 4, 1, 1, 1, -1, -10}, {4, 2, 3, 3, 3, -2, -20}}));
    const auto dir = oracle::temp_dir("profiles");
    frc::save_profiles(set, dir / "profiles-2019.json");
    CHECK(frc::load_profiles(dir / "profiles-2019.json") == set);
    CHECK_THROWS_AS(frc::profile_set_from_json(json{{"format_version", 99}}), frc::FormatVersionError);
    CHECK_THROWS_AS(set.at("999"), frc::MissingProfileError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("fixture event end to end") {
    const auto s = frc::load_year_schema(std::filesystem::path(FRC_SCHEMA_DIR) / "2019.json");
    const auto ds = frc::load_event(oracle::fixture("events/2019tst"));
    const auto set = frc::normalize_profiles(frc::aggregate_robot_profiles(std::span(&ds, 1), s));
    CHECK(set.profiles.size() == 18);
    std::size_t appearances = 0;
    for (const auto& [id, p] : set.profiles) {
      CHECK(p.normalized.is_normalized());
      appearances += p.match_count;
    }
    CHECK(appearances == 12 * 6);
    for (std::size_t k = 0; k < frc::kIndicatorCount; ++k) {
      bool attained = false;
      for (const auto& [id, p] : set.profiles) attained = attained || p.raw_means[k] == set.extrema[k];
      CHECK(attained);
    }
  }
}
