#include <doctest.h>

#include <cmath>
#include <numbers>

#include "frc/error.hpp"
#include "frc/optimizer.hpp"
#include "frc/random.hpp"
#include "oracles.hpp"

namespace {

frc::RobotProfile profile(const std::string& id, std::array<double, 7> v) {
  frc::RobotProfile p;
  p.team_id = id;
  p.match_count = 1;
  p.normalized.values = v;
  return p;
}

frc::IndicatorVector random_vector(frc::Rng& rng) {
  frc::IndicatorVector v;
  for (auto& x : v.values) x = rng.uniform();
  return v;
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("all-ones vector is the regular heptagon") {
    const double expect = 3.5 * std::sin(2 * std::numbers::pi / 7);
    CHECK(std::abs(frc::radar_area(frc::IndicatorVector::filled(1.0)).value - expect) < 1e-9);
    CHECK(std::abs(frc::radar_area(frc::IndicatorVector::filled(1.0)).value - 2.736410) < 1e-6);
    CHECK(frc::max_radar_area() == doctest::Approx(expect).epsilon(1e-15));
  }

  TEST_CASE("zero and single-spike vectors enclose nothing") {
    CHECK(frc::radar_area(frc::IndicatorVector{}).value == 0.0);
    for (std::size_t k = 0; k < 7; ++k) {
      frc::IndicatorVector v;
      v[k] = 1.0;
      CHECK(frc::radar_area(v).value == 0.0);
    }
  }

  TEST_CASE("out of range components are rejected") {
    CHECK_THROWS_AS(frc::radar_area(frc::IndicatorVector::filled(1.01)), frc::DomainError);
    auto v = frc::IndicatorVector::filled(0.5);
    v[3] = -0.1;
    CHECK_THROWS_AS(frc::radar_area(v), frc::DomainError);
    v[3] = std::nan("");
    CHECK_THROWS_AS(frc::radar_area(v), frc::DomainError);
  }

  TEST_CASE("area agrees with a shoelace computation over Cartesian vertices") {
    frc::Rng rng(1);
    for (int trial = 0; trial < 500; ++trial) {
      const auto v = random_vector(rng);
      CHECK(std::abs(frc::radar_area(v).value - oracle::shoelace_radar_area(v.values)) < 1e-12);
    }
  }

  TEST_CASE("cyclic shifts, scaling and monotonicity") {
    frc::Rng rng(2);
    for (int trial = 0; trial < 300; ++trial) {
      const auto v = random_vector(rng);
      const double a = frc::radar_area(v).value;
      for (std::size_t j = 1; j < 7; ++j) {
        frc::IndicatorVector r;
        for (std::size_t k = 0; k < 7; ++k) r[k] = v[(k + j) % 7];
        CHECK(std::abs(frc::radar_area(r).value - a) < 1e-12);
      }
      const double c = rng.uniform();
      frc::IndicatorVector s;
      for (std::size_t k = 0; k < 7; ++k) s[k] = c * v[k];
      CHECK(std::abs(frc::radar_area(s).value - c * c * a) < 1e-12);
      frc::IndicatorVector u;
      for (std::size_t k = 0; k < 7; ++k) u[k] = v[k] + (1 - v[k]) * rng.uniform();
      CHECK(frc::radar_area(u).value >= a);
      CHECK(a <= frc::max_radar_area() + 1e-15);
    }
  }

  TEST_CASE("pool of one returns that team") {
    const auto cap = profile("1", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const auto cand = profile("2", {0.2, 0.4, 0.6, 0.8, 1.0, 0.2, 0.4});
    const std::vector<const frc::RobotProfile*> members{&cap}, pool{&cand};
    const auto s = frc::suggest_partner(members, pool, 3);
    REQUIRE(s.size() == 1);
    CHECK(s[0].team_id == "2");
    // Partial alliance: averaged over the two present members.
    CHECK(s[0].effectiveness[0] == doctest::Approx(0.35));
    CHECK(s[0].area == doctest::Approx(frc::radar_area(s[0].effectiveness).value));
  }

  TEST_CASE("complementary candidate beats a copy of the captain") {
    // Alternating spikes enclose nothing; filling the gaps makes a heptagon.
    const auto cap = profile("10", {1, 0, 1, 0, 1, 0, 0});
    const auto copy = profile("20", {1, 0, 1, 0, 1, 0, 0});
    const auto comp = profile("30", {0, 1, 0, 1, 0, 1, 1});
    const std::vector<const frc::RobotProfile*> members{&cap}, pool{&copy, &comp};
    const auto s = frc::suggest_partner(members, pool, 2);
    CHECK(s[0].team_id == "30");
    const auto oracle_rank = oracle::exhaustive_partner_ranking(members, pool);
    CHECK(oracle_rank[0].team == "30");
    CHECK(s[0].area == doctest::Approx(oracle_rank[0].area).epsilon(1e-12));
    CHECK(s[1].area == 0.0);
  }

  TEST_CASE("top three suggestions, ties by team id") {
    const auto cap = profile("1", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const auto a = profile("1218", {0.7, 0.7, 0.7, 0.7, 0.7, 0.7, 0.7});
    const auto b = profile("225", {0.7, 0.7, 0.7, 0.7, 0.7, 0.7, 0.7});
    const auto c = profile("3", {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1});
    const auto d = profile("4", {0.6, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6});
    const std::vector<const frc::RobotProfile*> members{&cap}, pool{&a, &b, &c, &d};
    const auto s = frc::suggest_partner(members, pool, 3);
    REQUIRE(s.size() == 3);
    CHECK(s[0].team_id == "225");
    CHECK(s[1].team_id == "1218");
    CHECK(s[2].team_id == "4");
  }

  TEST_CASE("suggestion errors") {
    const auto cap = profile("1", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const std::vector<const frc::RobotProfile*> members{&cap}, empty;
    CHECK_THROWS_AS(frc::suggest_partner(members, empty, 3), frc::EmptyPoolError);
    const std::vector<const frc::RobotProfile*> pool{&cap};
    CHECK_THROWS_AS(frc::suggest_partner(members, pool, 3), frc::DuplicateMemberError);
    CHECK_THROWS_AS(frc::suggest_partner(empty, pool, 3), frc::DomainError);
  }

  TEST_CASE("suggestions equal an exhaustive argmax on small pools") {
    frc::Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + static_cast<std::size_t>(rng.below(20));
      const std::size_t n_members = 1 + static_cast<std::size_t>(rng.below(2));
      std::vector<frc::RobotProfile> profiles;
      for (std::size_t i = 0; i < n + n_members; ++i) profiles.push_back(profile(std::to_string(i + 1), random_vector(rng).values));
      std::vector<const frc::RobotProfile*> members, pool;
      for (std::size_t i = 0; i < n_members; ++i) members.push_back(&profiles[i]);
      for (std::size_t i = n_members; i < profiles.size(); ++i) pool.push_back(&profiles[i]);
      const auto got = frc::suggest_partner(members, pool, n);
      const auto want = oracle::exhaustive_partner_ranking(members, pool);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got[i].area - want[i].area) < 1e-12);
        if (i + 1 < got.size() && want[i].area - want[i + 1].area > 1e-12) CHECK(got[i].team_id == want[i].team);
      }
    }
  }

  TEST_CASE("rank alliances by area then member ids") {
    const auto one = profile("1", {1, 1, 1, 1, 1, 1, 1});
    const auto two = profile("2", {1, 1, 1, 1, 1, 1, 1});
    const auto three = profile("3", {1, 1, 1, 1, 1, 1, 1});
    const auto h4 = profile("4", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const auto h5 = profile("5", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const auto h6 = profile("6", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const auto h7 = profile("7", {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    const std::vector<frc::AllianceMembers> alliances{{&h7, &h5, &h6}, {&three, &one, &two}, {&h4, &h5, &h6}};
    const auto r = frc::rank_alliances(alliances);
    REQUIRE(r.size() == 3);
    CHECK(r[0].members == std::array<frc::TeamId, 3>{"1", "2", "3"});
    CHECK(r[1].members == std::array<frc::TeamId, 3>{"4", "5", "6"});
    CHECK(r[2].members == std::array<frc::TeamId, 3>{"5", "6", "7"});
    CHECK(r[1].area == r[2].area);
  }

  TEST_CASE("component-wise stronger alliance never has less area") {
    frc::Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<frc::RobotProfile> weak, strong;
      for (int i = 0; i < 3; ++i) {
        auto v = random_vector(rng);
        weak.push_back(profile(std::to_string(i + 1), v.values));
        for (auto& x : v.values) x = std::min(1.0, x + rng.uniform(0, 0.3));
        strong.push_back(profile(std::to_string(i + 11), v.values));
      }
      const std::vector<frc::AllianceMembers> alliances{{&weak[0], &weak[1], &weak[2]},
                                                        {&strong[0], &strong[1], &strong[2]}};
      const auto r = frc::rank_alliances(alliances);
      CHECK(r[0].members[0] == "11");
    }
  }

  TEST_CASE("radar plot data uses the fixed axis order") {
    const auto j = frc::radar_json(frc::IndicatorVector::filled(0.5));
    REQUIRE(j["axes"].size() == 7);
    CHECK(j["axes"][0] == "TraditionalLow");
    CHECK(j["axes"][6] == "Defense");
    CHECK(j["area"].get<double>() == doctest::Approx(0.25 * frc::max_radar_area()));
  }
}
