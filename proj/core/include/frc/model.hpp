#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "frc/indicators.hpp"

namespace frc {

// Red alliance effectiveness followed by blue, each in axis order.
inline constexpr std::size_t kFeatureCount = 2 * kIndicatorCount;

struct PredictionSample {
  std::array<double, kFeatureCount> features{};
  int label = 0;  // 1 = red won

  friend bool operator==(const PredictionSample&, const PredictionSample&) = default;
};

PredictionSample make_sample(const IndicatorVector& red, const IndicatorVector& blue, int label);

enum class Activation { Tanh, Relu };
enum class Solver { Sgd, Adam, Lbfgs };
enum class LearningRateSchedule { Constant, Adaptive };

std::string_view to_string(Activation a) noexcept;
std::string_view to_string(Solver s) noexcept;
std::string_view to_string(LearningRateSchedule s) noexcept;
Activation parse_activation(std::string_view s);
Solver parse_solver(std::string_view s);
LearningRateSchedule parse_schedule(std::string_view s);

struct ModelConfig {
  std::vector<int> hidden_layers{100};
  Activation activation = Activation::Tanh;
  Solver solver = Solver::Adam;
  double alpha = 1e-4;
  LearningRateSchedule learning_rate = LearningRateSchedule::Constant;
  int max_epochs = 500;
  std::uint64_t seed = 0;

  double learning_rate_init = 1e-3;
  int batch_size = 64;
  // Training stops once the epoch loss has failed to improve on the best loss
  // by a relative `tol` for `n_iter_no_change` consecutive epochs.
  double tol = 1e-4;
  int n_iter_no_change = 10;

  // Throws ConfigError.
  void validate() const;
  std::string describe() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

// Row-major sample matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

FeatureMatrix to_matrix(std::span<const PredictionSample> samples);
std::vector<double> labels_of(std::span<const PredictionSample> samples);

// Fully connected network with a single sigmoid output unit. Parameters live
// in one flat vector: for each layer, the (inputs x outputs) weight matrix in
// column-major order followed by the bias vector.
class Mlp {
 public:
  Mlp(std::vector<std::size_t> layer_sizes, Activation activation);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  Activation activation() const noexcept { return activation_; }
  std::size_t input_width() const noexcept { return sizes_.front(); }
  std::size_t layer_count() const noexcept { return sizes_.size() - 1; }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  std::size_t weight_offset(std::size_t layer) const { return offsets_.at(layer); }
  std::size_t bias_offset(std::size_t layer) const { return offsets_.at(layer) + sizes_[layer] * sizes_[layer + 1]; }

  // Glorot-uniform weights, zero biases.
  void initialize(std::uint64_t seed);

  // Mean binary cross-entropy over the rows of x plus (alpha / 2n) * ||W||^2.
  // Biases are not penalized. When `grad` is non-empty it receives the
  // gradient with the same layout as parameters().
  double loss_and_gradient(const FeatureMatrix& x, std::span<const double> y, double alpha,
                           std::span<double> grad) const;

  void predict_proba(const FeatureMatrix& x, std::span<double> out) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  Activation activation_;
  std::vector<double> params_;
};

struct TrainingMetadata {
  int epochs_run = 0;
  bool converged = false;
  double final_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> test_accuracy;
  std::size_t train_samples = 0;
  std::vector<double> loss_curve;

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

struct TrainedModel {
  ModelConfig config;
  std::vector<std::size_t> layer_sizes;  // 14, hidden..., 1
  std::vector<double> parameters;        // Mlp layout
  TrainingMetadata metadata;

  Mlp network() const;
};

// Minimizes mean binary cross-entropy plus the L2 penalty. Deterministic for
// a fixed config.seed. Throws ConfigError, TooFewSamplesError (empty set) and
// DivergenceError (non-finite loss).
TrainedModel train(const ModelConfig& config, std::span<const PredictionSample> train_set);

// Fraction of samples whose thresholded prediction matches the label.
double accuracy(const TrainedModel& model, std::span<const PredictionSample> samples);

struct Prediction {
  double probability = 0.5;  // P(red wins)
  bool red_wins = false;     // probability > 0.5
};

// Throws ShapeError when the model is not a 14-input network, DomainError
// when a vector is not normalized.
Prediction predict(const TrainedModel& model, const IndicatorVector& red, const IndicatorVector& blue);
double predict_probability(const TrainedModel& model, std::span<const double> features);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const TrainedModel& model);
// Throws FormatVersionError for anything that is not a well-formed model
// document of a supported version.
TrainedModel model_from_json(const nlohmann::json& doc);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace frc
