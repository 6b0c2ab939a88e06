#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frc/ingest.hpp"
#include "frc/model.hpp"
#include "frc/stats.hpp"

namespace frc {

struct TrainingSet {
  std::vector<PredictionSample> samples;
  std::size_t ties_excluded = 0;
};

// One sample per decided match: red then blue alliance effectiveness, label
// 1 when red won. Ties cannot be encoded and are only counted. Throws
// MissingProfileError for any team without a profile.
TrainingSet build_training_set(std::span<const EventDataset> datasets, const ProfileSet& profiles);

struct DatasetSplit {
  std::vector<PredictionSample> train;
  std::vector<PredictionSample> test;
};

// Seeded shuffle, then the first round(fraction * n) samples train.
DatasetSplit split_dataset(std::span<const PredictionSample> samples, double fraction, std::uint64_t seed);

// Fold index for every sample. Each label class is shuffled and dealt
// round-robin, continuing the deal across classes, so fold sizes differ by at
// most one and each class is spread within one sample per fold.
std::vector<std::size_t> stratified_folds(std::span<const PredictionSample> samples, std::size_t folds,
                                          std::uint64_t seed);

struct CrossValidationResult {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

CrossValidationResult cross_validate(const ModelConfig& config, std::span<const PredictionSample> samples,
                                     std::size_t folds, std::uint64_t seed);

// Values tried per hyperparameter. Enumeration order is hidden_layers
// (outermost), activation, solver, alpha, learning_rate, max_epochs
// (innermost); every other field comes from `base`. An empty max_epochs list
// means base.max_epochs only.
struct ParameterGrid {
  std::vector<std::vector<int>> hidden_layers;
  std::vector<Activation> activations;
  std::vector<Solver> solvers;
  std::vector<double> alphas;
  std::vector<LearningRateSchedule> learning_rates;
  std::vector<int> max_epochs;
  ModelConfig base;
  std::size_t folds = 10;

  std::size_t size() const noexcept;
  std::vector<ModelConfig> enumerate() const;
};

// Hidden sizes (50,50,50), (50,100,50), (100,), (50,50,50,50); tanh, relu;
// sgd, adam, lbfgs; alpha 1e-4, 0.05; constant, adaptive.
ParameterGrid table1_grid();

ParameterGrid parse_grid(const nlohmann::json& doc);
ParameterGrid load_grid(const std::filesystem::path& path);
nlohmann::json to_json(const ParameterGrid& grid);

struct GridEntry {
  ModelConfig config;
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
  std::optional<std::string> error;  // set when training failed; the entry then scores 0
  double seconds = 0.0;
};

struct GridSearchReport {
  std::vector<GridEntry> entries;  // enumeration order
  std::size_t best_index = 0;
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  std::size_t samples = 0;

  const GridEntry& best() const { return entries.at(best_index); }
};

// Cross-validates every combination and picks the highest mean accuracy,
// earliest in enumeration order on ties. `threads` = 0 uses every hardware
// thread; the report does not depend on the thread count.
GridSearchReport grid_search(const ParameterGrid& grid, std::span<const PredictionSample> samples,
                             std::uint64_t seed, unsigned threads = 0);

nlohmann::json to_json(const GridSearchReport& report);

}  // namespace frc
