#include "frc/predictor.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "frc/error.hpp"
#include "frc/random.hpp"

namespace frc {

using nlohmann::json;

TrainingSet build_training_set(std::span<const EventDataset> datasets, const ProfileSet& profiles) {
  TrainingSet out;
  for (const auto& ds : datasets) {
    for (const auto& m : ds.matches) {
      auto effectiveness = [&](Side side) {
        const auto& t = m.teams(side);
        return alliance_effectiveness(profiles.at(t[0]), profiles.at(t[1]), profiles.at(t[2]));
      };
      // Resolve both alliances before deciding on ties so a missing profile
      // is reported no matter the outcome.
      const IndicatorVector red = effectiveness(Side::Red);
      const IndicatorVector blue = effectiveness(Side::Blue);
      if (m.winner == Winner::Tie) {
        ++out.ties_excluded;
        continue;
      }
      out.samples.push_back(make_sample(red, blue, m.winner == Winner::Red ? 1 : 0));
    }
  }
  return out;
}

DatasetSplit split_dataset(std::span<const PredictionSample> samples, double fraction, std::uint64_t seed) {
  if (samples.size() < 2) throw TooFewSamplesError("need at least 2 samples to split");
  if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("split fraction must lie in (0, 1)");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(samples.size())));
  DatasetSplit out;
  out.train.reserve(n_train);
  out.test.reserve(samples.size() - n_train);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? out.train : out.test).push_back(samples[order[i]]);
  }
  return out;
}

std::vector<std::size_t> stratified_folds(std::span<const PredictionSample> samples, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw TooFewSamplesError("cross-validation needs at least 2 folds");
  if (samples.size() < folds) {
    throw TooFewSamplesError(std::to_string(samples.size()) + " samples cannot fill " + std::to_string(folds) +
                             " folds");
  }
  std::vector<std::size_t> negatives, positives;
  for (std::size_t i = 0; i < samples.size(); ++i) (samples[i].label ? positives : negatives).push_back(i);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(negatives));
  rng.shuffle(std::span<std::size_t>(positives));

  std::vector<std::size_t> assignment(samples.size());
  std::size_t next = 0;
  for (const auto* cls : {&negatives, &positives}) {
    for (std::size_t idx : *cls) {
      assignment[idx] = next;
      next = (next + 1) % folds;
    }
  }
  return assignment;
}

CrossValidationResult cross_validate(const ModelConfig& config, std::span<const PredictionSample> samples,
                                     std::size_t folds, std::uint64_t seed) {
  const auto assignment = stratified_folds(samples, folds, seed);
  CrossValidationResult out;
  std::vector<PredictionSample> train, validation;
  for (std::size_t k = 0; k < folds; ++k) {
    train.clear();
    validation.clear();
    for (std::size_t i = 0; i < samples.size(); ++i) (assignment[i] == k ? validation : train).push_back(samples[i]);
    const TrainedModel model = frc::train(config, train);
    out.fold_accuracies.push_back(accuracy(model, validation));
  }
  out.mean_accuracy = std::accumulate(out.fold_accuracies.begin(), out.fold_accuracies.end(), 0.0) /
                      static_cast<double>(folds);
  return out;
}

std::size_t ParameterGrid::size() const noexcept {
  return hidden_layers.size() * activations.size() * solvers.size() * alphas.size() * learning_rates.size() *
         std::max<std::size_t>(max_epochs.size(), 1);
}

std::vector<ModelConfig> ParameterGrid::enumerate() const {
  std::vector<ModelConfig> out;
  out.reserve(size());
  for (const auto& hidden : hidden_layers) {
    for (Activation act : activations) {
      for (Solver solver : solvers) {
        for (double alpha : alphas) {
          for (LearningRateSchedule lr : learning_rates) {
            ModelConfig c = base;
            c.hidden_layers = hidden;
            c.activation = act;
            c.solver = solver;
            c.alpha = alpha;
            c.learning_rate = lr;
            if (max_epochs.empty()) {
              out.push_back(std::move(c));
              continue;
            }
            for (int epochs : max_epochs) {
              c.max_epochs = epochs;
              out.push_back(c);
            }
          }
        }
      }
    }
  }
  return out;
}

ParameterGrid table1_grid() {
  ParameterGrid g;
  g.hidden_layers = {{50, 50, 50}, {50, 100, 50}, {100}, {50, 50, 50, 50}};
  g.activations = {Activation::Tanh, Activation::Relu};
  g.solvers = {Solver::Sgd, Solver::Adam, Solver::Lbfgs};
  g.alphas = {1e-4, 0.05};
  g.learning_rates = {LearningRateSchedule::Constant, LearningRateSchedule::Adaptive};
  return g;
}

ParameterGrid parse_grid(const json& doc) {
  if (!doc.is_object()) throw ConfigError("grid must be a JSON object");
  try {
    ParameterGrid g;
    g.hidden_layers = doc.at("hidden_layer_sizes").get<std::vector<std::vector<int>>>();
    for (const auto& s : doc.at("activation")) g.activations.push_back(parse_activation(s.get<std::string>()));
    for (const auto& s : doc.at("solver")) g.solvers.push_back(parse_solver(s.get<std::string>()));
    g.alphas = doc.at("alpha").get<std::vector<double>>();
    for (const auto& s : doc.at("learning_rate")) g.learning_rates.push_back(parse_schedule(s.get<std::string>()));
    if (doc.contains("base")) g.base = doc["base"].get<ModelConfig>();
    if (doc.contains("max_epochs")) g.max_epochs = doc["max_epochs"].get<std::vector<int>>();
    g.folds = doc.value("folds", g.folds);
    if (g.size() == 0) throw ConfigError("grid has no combinations");
    for (const auto& c : g.enumerate()) c.validate();
    return g;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed grid: ") + e.what());
  }
}

ParameterGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError(path.string() + " is not valid JSON");
  return parse_grid(doc);
}

json to_json(const ParameterGrid& g) {
  json acts = json::array(), solvers = json::array(), lrs = json::array();
  for (auto a : g.activations) acts.push_back(to_string(a));
  for (auto s : g.solvers) solvers.push_back(to_string(s));
  for (auto l : g.learning_rates) lrs.push_back(to_string(l));
  return json{{"hidden_layer_sizes", g.hidden_layers},
              {"activation", acts},
              {"solver", solvers},
              {"alpha", g.alphas},
              {"learning_rate", lrs},
              {"base", g.base},
              {"max_epochs", g.max_epochs},
              {"folds", g.folds}};
}

GridSearchReport grid_search(const ParameterGrid& grid, std::span<const PredictionSample> samples,
                             std::uint64_t seed, unsigned threads) {
  const auto configs = grid.enumerate();
  if (configs.empty()) throw ConfigError("grid has no combinations");
  // Surface an impossible fold count once instead of per combination.
  (void)stratified_folds(samples, grid.folds, seed);

  GridSearchReport report;
  report.seed = seed;
  report.folds = grid.folds;
  report.samples = samples.size();
  report.entries.resize(configs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      GridEntry& e = report.entries[i];
      e.config = configs[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto cv = cross_validate(configs[i], samples, grid.folds, seed);
        e.mean_accuracy = cv.mean_accuracy;
        e.fold_accuracies = cv.fold_accuracies;
      } catch (const Error& err) {
        e.mean_accuracy = 0.0;
        e.error = err.what();
      }
      e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    if (report.entries[i].mean_accuracy > report.entries[report.best_index].mean_accuracy) report.best_index = i;
  }
  return report;
}

json to_json(const GridSearchReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json item{{"config", e.config},
              {"mean_accuracy", e.mean_accuracy},
              {"fold_accuracies", e.fold_accuracies},
              {"seconds", e.seconds}};
    item["error"] = e.error ? json(*e.error) : json(nullptr);
    if (e.config.solver == Solver::Lbfgs) {
      item["solver_note"] = "limited-memory BFGS (10 correction pairs), backtracking Armijo line search, full batch";
    }
    entries.push_back(std::move(item));
  }
  return json{{"seed", report.seed},
              {"folds", report.folds},
              {"samples", report.samples},
              {"selection", "highest mean cross-validation accuracy; first in enumeration order on ties"},
              {"best_index", report.best_index},
              {"best_config", report.best().config},
              {"best_mean_accuracy", report.best().mean_accuracy},
              {"combinations", std::move(entries)}};
}

}  // namespace frc
