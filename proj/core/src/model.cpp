#include "frc/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "frc/error.hpp"
#include "frc/random.hpp"

namespace frc {

using nlohmann::json;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const Eigen::MatrixXd>;
using ConstBiases = Eigen::Map<const Eigen::VectorXd>;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::pair<std::string_view, Enum>, N>& table,
                std::string_view what) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const auto& [name, value] : table) {
    if (name == lower) return value;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, Activation>, 2> kActivations{
    {{"tanh", Activation::Tanh}, {"relu", Activation::Relu}}};
constexpr std::array<std::pair<std::string_view, Solver>, 4> kSolvers{
    {{"sgd", Solver::Sgd}, {"adam", Solver::Adam}, {"lbfgs", Solver::Lbfgs}, {"l-bfgs", Solver::Lbfgs}}};
constexpr std::array<std::pair<std::string_view, LearningRateSchedule>, 2> kSchedules{
    {{"constant", LearningRateSchedule::Constant}, {"adaptive", LearningRateSchedule::Adaptive}}};

}  // namespace

std::string_view to_string(Activation a) noexcept { return a == Activation::Tanh ? "tanh" : "relu"; }

std::string_view to_string(Solver s) noexcept {
  switch (s) {
    case Solver::Sgd:
      return "sgd";
    case Solver::Adam:
      return "adam";
    case Solver::Lbfgs:
      break;
  }
  return "lbfgs";
}

std::string_view to_string(LearningRateSchedule s) noexcept {
  return s == LearningRateSchedule::Constant ? "constant" : "adaptive";
}

Activation parse_activation(std::string_view s) { return parse_enum(s, kActivations, "activation"); }
Solver parse_solver(std::string_view s) { return parse_enum(s, kSolvers, "solver"); }
LearningRateSchedule parse_schedule(std::string_view s) { return parse_enum(s, kSchedules, "learning rate"); }

PredictionSample make_sample(const IndicatorVector& red, const IndicatorVector& blue, int label) {
  PredictionSample s;
  std::copy(red.values.begin(), red.values.end(), s.features.begin());
  std::copy(blue.values.begin(), blue.values.end(), s.features.begin() + kIndicatorCount);
  s.label = label;
  return s;
}

void ModelConfig::validate() const {
  for (int w : hidden_layers) {
    if (w < 1) throw ConfigError("hidden layer widths must be >= 1");
  }
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite value >= 0");
  if (!(learning_rate_init > 0.0) || !std::isfinite(learning_rate_init)) {
    throw ConfigError("learning_rate_init must be positive");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(tol >= 0.0)) throw ConfigError("tol must be >= 0");
  if (n_iter_no_change < 1) throw ConfigError("n_iter_no_change must be >= 1");
}

std::string ModelConfig::describe() const {
  std::ostringstream out;
  out << "hidden=(";
  for (std::size_t i = 0; i < hidden_layers.size(); ++i) out << (i ? "," : "") << hidden_layers[i];
  out << ") activation=" << to_string(activation) << " solver=" << to_string(solver) << " alpha=" << alpha
      << " learning_rate=" << to_string(learning_rate);
  return out.str();
}

void to_json(json& j, const ModelConfig& c) {
  j = json{{"hidden_layer_sizes", c.hidden_layers},
           {"activation", to_string(c.activation)},
           {"solver", to_string(c.solver)},
           {"alpha", c.alpha},
           {"learning_rate", to_string(c.learning_rate)},
           {"max_epochs", c.max_epochs},
           {"seed", c.seed},
           {"learning_rate_init", c.learning_rate_init},
           {"batch_size", c.batch_size},
           {"tol", c.tol},
           {"n_iter_no_change", c.n_iter_no_change}};
}

void from_json(const json& j, ModelConfig& c) {
  ModelConfig d;
  c.hidden_layers = j.value("hidden_layer_sizes", d.hidden_layers);
  c.activation = parse_activation(j.value("activation", std::string(to_string(d.activation))));
  c.solver = parse_solver(j.value("solver", std::string(to_string(d.solver))));
  c.alpha = j.value("alpha", d.alpha);
  c.learning_rate = parse_schedule(j.value("learning_rate", std::string(to_string(d.learning_rate))));
  c.max_epochs = j.value("max_epochs", d.max_epochs);
  c.seed = j.value("seed", d.seed);
  c.learning_rate_init = j.value("learning_rate_init", d.learning_rate_init);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.tol = j.value("tol", d.tol);
  c.n_iter_no_change = j.value("n_iter_no_change", d.n_iter_no_change);
}

FeatureMatrix to_matrix(std::span<const PredictionSample> samples) {
  FeatureMatrix x(samples.size(), kFeatureCount);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    std::copy(samples[r].features.begin(), samples[r].features.end(), x.data.begin() + r * kFeatureCount);
  }
  return x;
}

std::vector<double> labels_of(std::span<const PredictionSample> samples) {
  std::vector<double> y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) y[i] = samples[i].label ? 1.0 : 0.0;
  return y;
}

// ---------------------------------------------------------------------------
// Mlp

Mlp::Mlp(std::vector<std::size_t> layer_sizes, Activation activation)
    : sizes_(std::move(layer_sizes)), activation_(activation) {
  if (sizes_.size() < 2) throw ShapeError("a network needs at least an input and an output layer");
  if (sizes_.back() != 1) throw ShapeError("the output layer must have exactly one unit");
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw ShapeError("layer widths must be >= 1");
    offsets_.push_back(offset);
    offset += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(offset, 0.0);
}

void Mlp::initialize(std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double fan_in = static_cast<double>(sizes_[l]);
    const double fan_out = static_cast<double>(sizes_[l + 1]);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    const std::size_t begin = weight_offset(l);
    const std::size_t end = bias_offset(l);
    for (std::size_t i = begin; i < end; ++i) params_[i] = rng.uniform(-bound, bound);
    std::fill(params_.begin() + static_cast<std::ptrdiff_t>(end),
              params_.begin() + static_cast<std::ptrdiff_t>(end + sizes_[l + 1]), 0.0);
  }
}

namespace {

// Hidden activations for every layer plus the output logits. Buffers are
// reused across calls on the same thread; full-batch sizes exceed malloc's
// mmap threshold, so fresh matrices per call cost a syscall and page faults.
struct Workspace {
  std::vector<Eigen::MatrixXd> hidden;  // hidden[l] = output of hidden layer l
  Eigen::MatrixXd logits;               // n x 1
  Eigen::ArrayXXd scratch;
  Eigen::MatrixXd delta;
  Eigen::MatrixXd upstream;
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

void apply_activation(Eigen::MatrixXd& z, Activation a, Eigen::ArrayXXd& scratch) {
  if (a == Activation::Tanh) {
    // Eigen has no vectorized double tanh but does vectorize exp. Absolute
    // error stays near 1e-16, and backprop uses 1 - a^2 of whatever we return.
    scratch = (-2.0 * z.array().abs()).exp();
    scratch = (1.0 - scratch) / (1.0 + scratch);
    z.array() = (z.array() < 0.0).select(-scratch, scratch);
  } else {
    z = z.cwiseMax(0.0);
  }
}

}  // namespace

static void forward(const Mlp& net, const FeatureMatrix& x, Workspace& ws) {
  if (x.cols != net.input_width()) {
    throw ShapeError("expected " + std::to_string(net.input_width()) + " features, got " + std::to_string(x.cols));
  }
  const auto& sizes = net.layer_sizes();
  const auto params = net.parameters();
  const Eigen::Map<const RowMatrix> input(x.data.data(), static_cast<Eigen::Index>(x.rows),
                                          static_cast<Eigen::Index>(x.cols));
  ws.hidden.resize(net.layer_count() - 1);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const ConstWeights w(params.data() + net.weight_offset(l), static_cast<Eigen::Index>(sizes[l]),
                         static_cast<Eigen::Index>(sizes[l + 1]));
    const ConstBiases b(params.data() + net.bias_offset(l), static_cast<Eigen::Index>(sizes[l + 1]));
    const bool last = l + 1 == net.layer_count();
    Eigen::MatrixXd& z = last ? ws.logits : ws.hidden[l];
    z.resize(static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(sizes[l + 1]));
    if (l == 0) {
      z.noalias() = input * w;
    } else {
      z.noalias() = ws.hidden[l - 1] * w;
    }
    z.rowwise() += b.transpose();
    if (!last) apply_activation(z, net.activation(), ws.scratch);
  }
}

double Mlp::loss_and_gradient(const FeatureMatrix& x, std::span<const double> y, double alpha,
                              std::span<double> grad) const {
  if (y.size() != x.rows) throw ShapeError("label count does not match sample count");
  if (x.rows == 0) throw TooFewSamplesError("cannot evaluate the loss of an empty batch");
  if (!grad.empty() && grad.size() != params_.size()) throw ShapeError("gradient buffer has the wrong size");

  Workspace& ws = workspace();
  forward(*this, x, ws);
  const auto n = static_cast<double>(x.rows);
  const Eigen::Map<const Eigen::VectorXd> labels(y.data(), static_cast<Eigen::Index>(y.size()));
  const auto logits = ws.logits.col(0);

  double data_loss = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    data_loss += softplus(z) - labels[i] * z;
  }
  data_loss /= n;

  double penalty = 0.0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const ConstWeights w(params_.data() + weight_offset(l), static_cast<Eigen::Index>(sizes_[l]),
                         static_cast<Eigen::Index>(sizes_[l + 1]));
    penalty += w.squaredNorm();
  }
  const double loss = data_loss + 0.5 * alpha * penalty / n;
  if (grad.empty()) return loss;

  const Eigen::Map<const RowMatrix> input(x.data.data(), static_cast<Eigen::Index>(x.rows),
                                          static_cast<Eigen::Index>(x.cols));
  Eigen::MatrixXd& delta = ws.delta;
  delta.resize(logits.size(), 1);
  for (Eigen::Index i = 0; i < logits.size(); ++i) delta(i, 0) = (sigmoid(logits[i]) - labels[i]) / n;

  for (std::size_t l = layer_count(); l-- > 0;) {
    const auto in = static_cast<Eigen::Index>(sizes_[l]);
    const auto out = static_cast<Eigen::Index>(sizes_[l + 1]);
    const ConstWeights w(params_.data() + weight_offset(l), in, out);
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + weight_offset(l), in, out);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + bias_offset(l), out);
    if (l == 0) {
      gw.noalias() = input.transpose() * delta;
    } else {
      gw.noalias() = ws.hidden[l - 1].transpose() * delta;
    }
    gw += (alpha / n) * w;
    gb = delta.colwise().sum().transpose();
    if (l == 0) break;

    ws.upstream.resize(delta.rows(), in);
    ws.upstream.noalias() = delta * w.transpose();
    const Eigen::MatrixXd& a = ws.hidden[l - 1];
    if (activation_ == Activation::Tanh) {
      ws.upstream.array() *= 1.0 - a.array().square();
    } else {
      ws.upstream.array() *= (a.array() > 0.0).cast<double>();
    }
    delta.swap(ws.upstream);
  }
  return loss;
}

void Mlp::predict_proba(const FeatureMatrix& x, std::span<double> out) const {
  if (out.size() != x.rows) throw ShapeError("output buffer does not match sample count");
  if (x.rows == 0) return;
  Workspace& ws = workspace();
  forward(*this, x, ws);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = sigmoid(ws.logits(static_cast<Eigen::Index>(i), 0));
}

Mlp TrainedModel::network() const {
  Mlp net(layer_sizes, config.activation);
  if (parameters.size() != net.parameters().size()) throw ShapeError("parameter count does not match layer sizes");
  std::copy(parameters.begin(), parameters.end(), net.parameters().begin());
  return net;
}

// ---------------------------------------------------------------------------
// Training

namespace {

void check_finite(double loss, int epoch) {
  if (!std::isfinite(loss)) throw DivergenceError("loss became non-finite at epoch " + std::to_string(epoch));
}

// Relative-improvement early stopping shared by the minibatch solvers.
class ConvergenceMonitor {
 public:
  explicit ConvergenceMonitor(const ModelConfig& c) : config_(c) {}

  // Returns true when the epoch counted as "no improvement".
  bool record(double loss) {
    const bool stalled = loss > best_ - config_.tol * std::abs(best_);
    stalled_ = stalled ? stalled_ + 1 : 0;
    best_ = std::min(best_, loss);
    return stalled;
  }
  int stalled_epochs() const noexcept { return stalled_; }
  void reset_stall() noexcept { stalled_ = 0; }

 private:
  const ModelConfig& config_;
  double best_ = std::numeric_limits<double>::infinity();
  int stalled_ = 0;
};

FeatureMatrix gather_rows(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  FeatureMatrix out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(x.data.begin() + static_cast<std::ptrdiff_t>(rows[i] * x.cols), x.cols,
                out.data.begin() + static_cast<std::ptrdiff_t>(i * x.cols));
  }
  return out;
}

void train_minibatch(const ModelConfig& c, Mlp& net, const FeatureMatrix& x, const std::vector<double>& y,
                     TrainingMetadata& meta) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEpsilon = 1e-8;
  constexpr double kMomentum = 0.9;
  constexpr double kMinLearningRate = 1e-6;

  const std::size_t n = x.rows;
  const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(c.batch_size), n);
  auto params = net.parameters();
  std::vector<double> grad(params.size());
  std::vector<double> first(params.size(), 0.0);   // adam m / sgd velocity
  std::vector<double> second(params.size(), 0.0);  // adam v
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> batch_y;

  Rng rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  ConvergenceMonitor monitor(c);
  double lr = c.learning_rate_init;
  long long step = 0;

  for (int epoch = 1; epoch <= c.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t len = std::min(batch, n - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      const FeatureMatrix bx = gather_rows(x, rows);
      batch_y.resize(len);
      for (std::size_t i = 0; i < len; ++i) batch_y[i] = y[rows[i]];

      const double loss = net.loss_and_gradient(bx, batch_y, c.alpha, grad);
      check_finite(loss, epoch);
      epoch_loss += loss * static_cast<double>(len);

      ++step;
      if (c.solver == Solver::Adam) {
        const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
        const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
        const double step_size = lr * std::sqrt(corr2) / corr1;
        for (std::size_t i = 0; i < params.size(); ++i) {
          first[i] = kBeta1 * first[i] + (1.0 - kBeta1) * grad[i];
          second[i] = kBeta2 * second[i] + (1.0 - kBeta2) * grad[i] * grad[i];
          params[i] -= step_size * first[i] / (std::sqrt(second[i]) + kEpsilon);
        }
      } else {
        // Nesterov momentum.
        for (std::size_t i = 0; i < params.size(); ++i) {
          first[i] = kMomentum * first[i] - lr * grad[i];
          params[i] += kMomentum * first[i] - lr * grad[i];
        }
      }
    }
    epoch_loss /= static_cast<double>(n);
    check_finite(epoch_loss, epoch);
    meta.loss_curve.push_back(epoch_loss);
    meta.epochs_run = epoch;

    monitor.record(epoch_loss);
    if (c.learning_rate == LearningRateSchedule::Adaptive) {
      if (monitor.stalled_epochs() >= 2) {
        lr /= 2.0;
        monitor.reset_stall();
        if (lr < kMinLearningRate) {
          meta.converged = true;
          break;
        }
      }
    } else if (monitor.stalled_epochs() >= c.n_iter_no_change) {
      meta.converged = true;
      break;
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Limited-memory BFGS with a backtracking Armijo line search, full batch.
// One iteration counts as one epoch.
void train_lbfgs(const ModelConfig& c, Mlp& net, const FeatureMatrix& x, const std::vector<double>& y,
                 TrainingMetadata& meta) {
  constexpr std::size_t kHistory = 10;
  constexpr double kArmijo = 1e-4;
  constexpr double kFtol = 2.220446049250313e-09;
  constexpr int kMaxBacktracks = 40;

  auto params = net.parameters();
  const std::size_t dim = params.size();
  std::vector<double> g(dim), g_new(dim), d(dim), x_old(dim);
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;

  double f = net.loss_and_gradient(x, y, c.alpha, g);
  check_finite(f, 0);

  for (int iter = 1; iter <= c.max_epochs; ++iter) {
    // Two-loop recursion: d = -H g.
    std::vector<double> q(g);
    std::vector<double> alphas(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alphas[k] = rho_hist[k] * dot(s_hist[k], q);
      for (std::size_t i = 0; i < dim; ++i) q[i] -= alphas[k] * y_hist[k][i];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (std::size_t i = 0; i < dim; ++i) q[i] *= gamma;
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], q);
      for (std::size_t i = 0; i < dim; ++i) q[i] += s_hist[k][i] * (alphas[k] - beta);
    }
    for (std::size_t i = 0; i < dim; ++i) d[i] = -q[i];

    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < dim; ++i) d[i] = -g[i];
      slope = -dot(g, g);
    }

    double t = 1.0;
    if (s_hist.empty()) t = std::min(1.0, 1.0 / std::sqrt(dot(g, g)));
    std::copy(params.begin(), params.end(), x_old.begin());
    double f_new = 0.0;
    bool accepted = false;
    for (int b = 0; b < kMaxBacktracks; ++b) {
      for (std::size_t i = 0; i < dim; ++i) params[i] = x_old[i] + t * d[i];
      f_new = net.loss_and_gradient(x, y, c.alpha, g_new);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      std::copy(x_old.begin(), x_old.end(), params.begin());
      meta.converged = true;  // no descent possible along the search direction
      break;
    }

    std::vector<double> s(dim), yk(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = params[i] - x_old[i];
      yk[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, yk);
    if (sy > 1e-10) {
      if (s_hist.size() == kHistory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yk));
      rho_hist.push_back(1.0 / sy);
    }

    const double f_old = f;
    f = f_new;
    g.swap(g_new);
    meta.loss_curve.push_back(f);
    meta.epochs_run = iter;

    double g_inf = 0.0;
    for (double v : g) g_inf = std::max(g_inf, std::abs(v));
    if (g_inf <= c.tol || (f_old - f) <= kFtol * std::max({std::abs(f_old), std::abs(f), 1.0})) {
      meta.converged = true;
      break;
    }
  }
}

}  // namespace

TrainedModel train(const ModelConfig& config, std::span<const PredictionSample> train_set) {
  config.validate();
  if (train_set.empty()) throw TooFewSamplesError("training set is empty");

  std::vector<std::size_t> sizes{kFeatureCount};
  for (int w : config.hidden_layers) sizes.push_back(static_cast<std::size_t>(w));
  sizes.push_back(1);

  Mlp net(sizes, config.activation);
  net.initialize(config.seed);

  const FeatureMatrix x = to_matrix(train_set);
  const std::vector<double> y = labels_of(train_set);
  for (double v : x.data) {
    if (!std::isfinite(v)) throw DomainError("training features must be finite");
  }

  TrainedModel model;
  model.config = config;
  model.layer_sizes = sizes;
  if (config.solver == Solver::Lbfgs) {
    train_lbfgs(config, net, x, y, model.metadata);
  } else {
    train_minibatch(config, net, x, y, model.metadata);
  }
  model.metadata.final_loss = model.metadata.loss_curve.empty() ? 0.0 : model.metadata.loss_curve.back();
  model.metadata.train_samples = train_set.size();
  model.parameters.assign(net.parameters().begin(), net.parameters().end());
  model.metadata.train_accuracy = accuracy(model, train_set);
  return model;
}

double accuracy(const TrainedModel& model, std::span<const PredictionSample> samples) {
  if (samples.empty()) return 0.0;
  const Mlp net = model.network();
  const FeatureMatrix x = to_matrix(samples);
  std::vector<double> p(samples.size());
  net.predict_proba(x, p);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if ((p[i] > 0.5 ? 1 : 0) == samples[i].label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double predict_probability(const TrainedModel& model, std::span<const double> features) {
  if (model.layer_sizes.empty() || model.layer_sizes.front() != kFeatureCount) {
    throw ShapeError("model does not take 14 input features");
  }
  if (features.size() != kFeatureCount) {
    throw ShapeError("expected 14 features, got " + std::to_string(features.size()));
  }
  const Mlp net = model.network();
  FeatureMatrix x(1, kFeatureCount);
  std::copy(features.begin(), features.end(), x.data.begin());
  double p = 0.0;
  net.predict_proba(x, std::span<double>(&p, 1));
  return p;
}

Prediction predict(const TrainedModel& model, const IndicatorVector& red, const IndicatorVector& blue) {
  if (!red.is_normalized() || !blue.is_normalized()) {
    throw DomainError("prediction inputs must be normalized vectors in [0, 1]");
  }
  const PredictionSample s = make_sample(red, blue, 0);
  Prediction out;
  out.probability = predict_probability(model, s.features);
  out.red_wins = out.probability > 0.5;
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

json to_json(const TrainedModel& model) {
  const Mlp net = model.network();
  json layers = json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const std::size_t in = model.layer_sizes[l];
    const std::size_t out = model.layer_sizes[l + 1];
    json weights = json::array();
    for (std::size_t r = 0; r < in; ++r) {
      json row = json::array();
      for (std::size_t col = 0; col < out; ++col) row.push_back(model.parameters[net.weight_offset(l) + col * in + r]);
      weights.push_back(std::move(row));
    }
    json biases = json::array();
    for (std::size_t col = 0; col < out; ++col) biases.push_back(model.parameters[net.bias_offset(l) + col]);
    layers.push_back({{"inputs", in}, {"outputs", out}, {"weights", std::move(weights)}, {"biases", std::move(biases)}});
  }
  const auto& m = model.metadata;
  json meta{{"epochs_run", m.epochs_run},       {"converged", m.converged},
            {"final_loss", m.final_loss},       {"train_accuracy", m.train_accuracy},
            {"train_samples", m.train_samples}, {"loss_curve", m.loss_curve}};
  meta["test_accuracy"] = m.test_accuracy ? json(*m.test_accuracy) : json(nullptr);
  return json{{"format", "frc-mlp"},
              {"format_version", kModelFormatVersion},
              {"config", model.config},
              {"layer_sizes", model.layer_sizes},
              {"layers", std::move(layers)},
              {"metadata", std::move(meta)}};
}

TrainedModel model_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "frc-mlp") throw FormatVersionError("not a model document");
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer() ||
      doc["format_version"].get<int>() != kModelFormatVersion) {
    throw FormatVersionError("unsupported model format_version");
  }
  try {
    TrainedModel model;
    model.config = doc.at("config").get<ModelConfig>();
    model.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
    if (model.layer_sizes.size() != model.config.hidden_layers.size() + 2 ||
        model.layer_sizes.front() != kFeatureCount || model.layer_sizes.back() != 1) {
      throw FormatVersionError("layer sizes do not chain from 14 inputs to 1 output");
    }
    const Mlp net(model.layer_sizes, model.config.activation);
    model.parameters.assign(net.parameters().size(), 0.0);
    const json& layers = doc.at("layers");
    if (!layers.is_array() || layers.size() != net.layer_count()) throw FormatVersionError("wrong number of layers");
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      const std::size_t in = model.layer_sizes[l];
      const std::size_t out = model.layer_sizes[l + 1];
      const json& weights = layers[l].at("weights");
      const json& biases = layers[l].at("biases");
      if (weights.size() != in || biases.size() != out) throw FormatVersionError("layer shape mismatch");
      for (std::size_t r = 0; r < in; ++r) {
        if (weights[r].size() != out) throw FormatVersionError("layer shape mismatch");
        for (std::size_t col = 0; col < out; ++col) {
          model.parameters[net.weight_offset(l) + col * in + r] = weights[r][col].get<double>();
        }
      }
      for (std::size_t col = 0; col < out; ++col) model.parameters[net.bias_offset(l) + col] = biases[col].get<double>();
    }
    const json& meta = doc.at("metadata");
    auto& m = model.metadata;
    m.epochs_run = meta.at("epochs_run").get<int>();
    m.converged = meta.at("converged").get<bool>();
    m.final_loss = meta.at("final_loss").get<double>();
    m.train_accuracy = meta.at("train_accuracy").get<double>();
    m.train_samples = meta.at("train_samples").get<std::size_t>();
    m.loss_curve = meta.at("loss_curve").get<std::vector<double>>();
    if (meta.contains("test_accuracy") && !meta["test_accuracy"].is_null()) {
      m.test_accuracy = meta["test_accuracy"].get<double>();
    }
    return model;
  } catch (const json::exception& e) {
    throw FormatVersionError(std::string("malformed model document: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatVersionError(std::string("malformed model config: ") + e.what());
  } catch (const ShapeError& e) {
    throw FormatVersionError(std::string("malformed model shape: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(model).dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw FormatVersionError(path.string() + " is not valid JSON");
  return model_from_json(doc);
}

}  // namespace frc
