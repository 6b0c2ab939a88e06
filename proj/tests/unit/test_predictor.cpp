#include <doctest.h>

#include <set>

#include "frc/error.hpp"
#include "frc/predictor.hpp"
#include "frc/random.hpp"
#include "frc/synthetic.hpp"
#include "oracles.hpp"

namespace {

std::vector<frc::PredictionSample> balanced_noise(std::size_t n, std::uint64_t seed) {
  frc::Rng rng(seed);
  std::vector<frc::PredictionSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& f : out[i].features) f = rng.uniform();
    out[i].label = static_cast<int>(i % 2);
  }
  return out;
}

frc::RobotProfile profile(const std::string& id, double level) {
  frc::RobotProfile p;
  p.team_id = id;
  p.match_count = 1;
  p.normalized = frc::IndicatorVector::filled(level);
  p.raw_means = p.normalized;
  return p;
}

frc::MatchRecord match(const std::string& key, frc::AllianceTeams red, frc::AllianceTeams blue, int rt, int bt) {
  frc::MatchRecord m;
  m.match_key = key;
  m.event_key = "2019tst";
  m.year = 2019;
  m.red_teams = std::move(red);
  m.blue_teams = std::move(blue);
  m.red_total = rt;
  m.blue_total = bt;
  m.winner = frc::winner_from_totals(rt, bt);
  return m;
}

}  // namespace

TEST_SUITE("predictor") {
  TEST_CASE("training set rows are hand-joined effectiveness vectors") {
    frc::ProfileSet set;
    set.year = 2019;
    const double levels[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.9};
    for (int i = 0; i < 7; ++i) set.profiles.emplace(std::to_string(i + 1), profile(std::to_string(i + 1), levels[i]));

    frc::EventDataset ds;
    ds.year = 2019;
    ds.matches = {match("2019tst_qm1", {"5", "6", "7"}, {"1", "2", "3"}, 90, 20),
                  match("2019tst_qm2", {"1", "2", "4"}, {"5", "6", "7"}, 10, 70),
                  match("2019tst_qm3", {"1", "3", "5"}, {"2", "4", "6"}, 40, 40),
                  match("2019tst_qm4", {"2", "3", "4"}, {"1", "5", "7"}, 33, 32),
                  match("2019tst_qm5", {"7", "1", "2"}, {"3", "4", "5"}, 0, 1)};
    const auto ts = frc::build_training_set(std::span(&ds, 1), set);
    CHECK(ts.ties_excluded == 1);
    REQUIRE(ts.samples.size() == 4);
    // (red mean, blue mean, label) per decided match, worked by hand.
    const double expect[4][3] = {{2.0 / 3, 0.2, 1}, {0.7 / 3, 2.0 / 3, 0}, {0.3, 1.5 / 3, 1}, {1.2 / 3, 0.4, 0}};
    for (int r = 0; r < 4; ++r) {
      CAPTURE(r);
      for (std::size_t k = 0; k < 7; ++k) {
        CHECK(ts.samples[r].features[k] == doctest::Approx(expect[r][0]).epsilon(1e-12));
        CHECK(ts.samples[r].features[7 + k] == doctest::Approx(expect[r][1]).epsilon(1e-12));
      }
      CHECK(ts.samples[r].label == static_cast<int>(expect[r][2]));
    }

    ds.matches.push_back(match("2019tst_qm6", {"1", "2", "99"}, {"3", "4", "5"}, 1, 0));
    try {
      frc::build_training_set(std::span(&ds, 1), set);
      FAIL("expected MissingProfileError");
    } catch (const frc::MissingProfileError& e) {
      CHECK(e.team_id() == "99");
    }
  }

  TEST_CASE("split sizes follow the rounding rule") {
    CHECK(frc::split_dataset(balanced_noise(100, 1), 0.85, 3).train.size() == 85);
    CHECK(frc::split_dataset(balanced_noise(100, 1), 0.85, 3).test.size() == 15);
    const auto seven = frc::split_dataset(balanced_noise(7, 1), 0.85, 3);
    CHECK(seven.train.size() == 6);
    CHECK(seven.test.size() == 1);
    CHECK_THROWS_AS(frc::split_dataset(balanced_noise(1, 1), 0.85, 3), frc::TooFewSamplesError);
    CHECK_THROWS_AS(frc::split_dataset(balanced_noise(10, 1), 1.5, 3), frc::DomainError);
  }

  TEST_CASE("split is seeded, disjoint and exhaustive") {
    auto data = balanced_noise(50, 2);
    for (std::size_t i = 0; i < data.size(); ++i) data[i].features[0] = static_cast<double>(i);
    const auto a = frc::split_dataset(data, 0.85, 9);
    const auto b = frc::split_dataset(data, 0.85, 9);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    std::multiset<double> ids;
    for (const auto& s : a.train) ids.insert(s.features[0]);
    for (const auto& s : a.test) ids.insert(s.features[0]);
    CHECK(ids.size() == 50);
    CHECK(std::set<double>(ids.begin(), ids.end()).size() == 50);
    CHECK(frc::split_dataset(data, 0.85, 10).train != a.train);
  }

  TEST_CASE("folds are disjoint, exhaustive and stratified") {
    frc::Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 20 + static_cast<std::size_t>(rng.below(200));
      const std::size_t k = 2 + static_cast<std::size_t>(rng.below(9));
      std::vector<frc::PredictionSample> data(n);
      for (auto& s : data) s.label = rng.bernoulli(0.3) ? 1 : 0;
      const auto folds = frc::stratified_folds(data, k, trial);
      REQUIRE(folds.size() == n);
      std::vector<std::size_t> size(k, 0), pos(k, 0);
      for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(folds[i] < k);
        ++size[folds[i]];
        pos[folds[i]] += static_cast<std::size_t>(data[i].label);
      }
      CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
      CHECK(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()) <= 1);
      CHECK(frc::stratified_folds(data, k, trial) == folds);
    }
    const auto hundred = frc::stratified_folds(balanced_noise(100, 1), 10, 5);
    for (std::size_t f = 0; f < 10; ++f) CHECK(std::count(hundred.begin(), hundred.end(), f) == 10);
    CHECK_THROWS_AS(frc::stratified_folds(balanced_noise(5, 1), 10, 1), frc::TooFewSamplesError);
  }

  TEST_CASE("constant predictor scores one half on balanced data") {
    // A huge L2 penalty pins every weight at zero, so the network predicts
    // one label for everything.
    frc::ModelConfig c;
    c.hidden_layers = {4};
    c.alpha = 1e5;
    c.max_epochs = 30;
    const auto cv = frc::cross_validate(c, balanced_noise(200, 3), 10, 1);
    CHECK(cv.fold_accuracies.size() == 10);
    CHECK(cv.mean_accuracy == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(cv.mean_accuracy - 0.5) <= 0.05);
  }

  TEST_CASE("Table I grid enumeration") {
    const auto g = frc::table1_grid();
    CHECK(g.size() == 96);
    const auto all = g.enumerate();
    REQUIRE(all.size() == 96);
    CHECK(all[0].hidden_layers == std::vector<int>{50, 50, 50});
    CHECK(all[1].learning_rate == frc::LearningRateSchedule::Adaptive);
    CHECK(all[2].alpha == 0.05);
    CHECK(all[4].solver == frc::Solver::Adam);
    CHECK(all[12].activation == frc::Activation::Relu);
    CHECK(all[24].hidden_layers == std::vector<int>{50, 100, 50});
    CHECK(all[95].hidden_layers == std::vector<int>{50, 50, 50, 50});
    const auto file = frc::load_grid(std::filesystem::path(FRC_GRID_DIR) / "table1.json");
    CHECK(file.enumerate() == all);
    CHECK(frc::parse_grid(frc::to_json(g)).enumerate() == all);
    CHECK_THROWS_AS(frc::parse_grid(nlohmann::json{{"activation", {"tanh"}}}), frc::ConfigError);
  }

  TEST_CASE("grid of one config returns it") {
    frc::ParameterGrid g;
    g.hidden_layers = {{3}};
    g.activations = {frc::Activation::Relu};
    g.solvers = {frc::Solver::Adam};
    g.alphas = {1e-4};
    g.learning_rates = {frc::LearningRateSchedule::Constant};
    g.base.max_epochs = 5;
    g.folds = 3;
    const auto r = frc::grid_search(g, balanced_noise(30, 1), 1);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.best_index == 0);
    CHECK(r.best().config == g.enumerate()[0]);
  }

  TEST_CASE("crippled config loses to a sane one and scores 0") {
    frc::synthetic::MatchSampleOptions o;
    o.matches = 300;
    o.label_noise = 0.0;
    o.seed = 2;
    const auto data = frc::synthetic::oracle_match_samples(o);
    frc::ParameterGrid g;
    g.hidden_layers = {{8}};
    g.activations = {frc::Activation::Tanh};
    g.solvers = {frc::Solver::Adam};
    g.alphas = {1e-4};
    g.learning_rates = {frc::LearningRateSchedule::Constant};
    g.max_epochs = {0, 500};  // crippled budget first, so a tie would favour it
    g.folds = 3;
    const auto r = frc::grid_search(g, data, 1);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].error.has_value());
    CHECK(r.entries[0].mean_accuracy == 0.0);
    CHECK(r.best_index == 1);
    CHECK(r.best().config.max_epochs == 500);
    CHECK(r.best().mean_accuracy > 0.8);
  }

  TEST_CASE("grid report does not depend on thread count") {
    frc::ParameterGrid g;
    g.hidden_layers = {{4}, {6}};
    g.activations = {frc::Activation::Tanh, frc::Activation::Relu};
    g.solvers = {frc::Solver::Adam};
    g.alphas = {1e-4};
    g.learning_rates = {frc::LearningRateSchedule::Constant};
    g.base.max_epochs = 10;
    g.folds = 3;
    const auto data = balanced_noise(60, 8);
    const auto a = frc::grid_search(g, data, 5, 1);
    const auto b = frc::grid_search(g, data, 5, 3);
    REQUIRE(a.entries.size() == b.entries.size());
    CHECK(a.best_index == b.best_index);
    for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].fold_accuracies == b.entries[i].fold_accuracies);
    const auto doc = frc::to_json(a);
    CHECK(doc["combinations"].size() == 4);
  }

  TEST_CASE("swapped alliances give complementary probabilities") {
    frc::synthetic::MatchSampleOptions o;
    o.matches = 3000;
    o.seed = 12;
    const auto data = frc::synthetic::oracle_match_samples(o);
    frc::ModelConfig c;
    c.hidden_layers = {16};
    c.max_epochs = 60;
    const auto m = frc::train(c, data);
    frc::Rng rng(13);
    double total_gap = 0.0;
    int dominant_right = 0;
    for (int i = 0; i < 1000; ++i) {
      frc::IndicatorVector r, b;
      for (std::size_t k = 0; k < 7; ++k) {
        r[k] = rng.uniform();
        b[k] = rng.uniform();
      }
      total_gap += std::abs(frc::predict(m, r, b).probability + frc::predict(m, b, r).probability - 1.0);
      frc::IndicatorVector strong = r;
      for (auto& x : strong.values) x = std::min(1.0, x + 0.5);
      dominant_right += frc::predict(m, strong, r).probability > 0.5;
    }
    CHECK(total_gap / 1000 < 0.1);
    CHECK(dominant_right >= 990);
  }
}
