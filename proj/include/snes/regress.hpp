#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "snes/rng.hpp"

namespace snes {

// Value-function predictor inputs, in fixed order:
// {period, prior storage, buy, sell, store}.
constexpr int kFeatureCount = 5;
using FeatureVector = std::array<double, kFeatureCount>;

struct TrainingSample {
  FeatureVector x{};
  double y = 0.0;
};

// ---------------------------------------------------------------------------
// Ordinary least squares
// ---------------------------------------------------------------------------

struct LinearModel {
  // beta[0] is the intercept, beta[1..5] the feature coefficients.
  std::array<double, kFeatureCount + 1> beta{};
};

// Normal-equation least squares. Requires at least 6 samples. A singular
// normal matrix falls back to a tiny ridge term when allow_ridge_fallback
// is set and throws std::runtime_error otherwise.
LinearModel fit_ols(const std::vector<TrainingSample>& samples,
                    bool allow_ridge_fallback = true);

// ---------------------------------------------------------------------------
// Linear epsilon-insensitive SVR
// ---------------------------------------------------------------------------

struct SvrHyperParams {
  double penalty = 1.0;   // weight of the epsilon-insensitive losses
  double epsilon = 0.0;   // tube half-width, in label units
  int max_iter = 1000;
  double tol = 1e-5;      // stop when the tracked objective improves less
};

struct SvrModel {
  std::array<double, kFeatureCount> weights{};
  double bias = 0.0;
  SvrHyperParams hyper;
  double objective = 0.0;  // primal objective of the returned parameters
};

// Primal objective 0.5*||w||^2 + penalty * sum_i max(0, |y_i - f(x_i)| -
// epsilon) of a model on a sample set.
double svr_primal_objective(const SvrModel& model,
                            const std::vector<TrainingSample>& samples);

// Batch subgradient descent on the primal objective with step 1/(penalty *
// iteration), tracking the best iterate seen. Features and labels are
// standardized internally; the returned weights are in raw units.
SvrModel fit_linear_svr(const std::vector<TrainingSample>& samples,
                        const SvrHyperParams& hyper = {});

// ---------------------------------------------------------------------------
// Feed-forward network, 5 -> 10 -> 10 -> 1
// ---------------------------------------------------------------------------

constexpr int kNnHidden = 10;

struct NnModel {
  // Row-major weight matrices; layer k maps its input vector through
  // w[k] then adds b[k]. Rectifier on both hidden layers, identity output.
  std::vector<double> w1, b1;  // kNnHidden x kFeatureCount, kNnHidden
  std::vector<double> w2, b2;  // kNnHidden x kNnHidden,     kNnHidden
  std::vector<double> w3, b3;  // 1 x kNnHidden,             1
  double dropout_rate = 0.2;   // applied after each hidden layer, training only
  double label_shift = 0.0;    // added back to the output at predict time

  bool shapes_valid() const;
};

// Glorot-uniform weights, zero biases.
NnModel nn_init(std::uint64_t seed);

// Output of the network in shifted-label space. With training=true,
// dropout masks are drawn from rng (required); inference ignores rng and is
// a pure function of (model, x).
double nn_forward(const NnModel& model, const FeatureVector& x, bool training,
                  RngStream* rng = nullptr);

struct AdamConfig {
  double step = 0.001;
  double decay1 = 0.9;
  double decay2 = 0.999;
  double stabilizer = 1e-7;
};

// Per-parameter Adam moments. update() returns the increment to add to the
// parameter for gradient g at (1-based) step count.
struct AdamState {
  double m = 0.0;
  double v = 0.0;
  double update(double grad, long step_count, const AdamConfig& cfg);
};

struct TrainConfig {
  int batch_size = 100;
  int epochs = 15;
  double train_fraction = 0.7;       // train+validation vs held-out test
  double validation_fraction = 0.2;  // of the training partition
  AdamConfig adam;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NnTrainReport {
  std::vector<double> train_msle;  // per epoch, on the fitted partition
  std::vector<double> val_msle;    // per epoch
  int best_epoch = 0;              // epoch whose snapshot was returned
  double best_val_msle = 0.0;
  double final_train_msle = 0.0;
  double test_msle = 0.0;          // held-out partition, informational
};

// Gradient container mirroring NnModel's parameter tensors.
struct NnGradients {
  std::vector<double> w1, b1, w2, b2, w3, b3;
};

// Mean squared-log error of the model on a batch (shifted-label space),
// dropout off.
double nn_batch_loss(const NnModel& model,
                     const std::vector<TrainingSample>& batch);

// Loss plus parameter gradients via backpropagation. When dropout_rng is
// non-null, dropout masks are drawn and applied consistently in the forward
// and backward passes.
double nn_loss_and_gradients(const NnModel& model,
                             const std::vector<TrainingSample>& batch,
                             NnGradients& grads,
                             RngStream* dropout_rng = nullptr);

// Adam training on mean squared-log error (negative values clamped at
// zero inside the loss); keeps the parameter snapshot with the lowest
// validation loss. Requires at least batch_size samples.
NnModel nn_train(const std::vector<TrainingSample>& samples,
                 const TrainConfig& cfg, NnTrainReport* report = nullptr);

// ---------------------------------------------------------------------------
// Common surface
// ---------------------------------------------------------------------------

using ValueModel = std::variant<LinearModel, SvrModel, NnModel>;

double predict(const LinearModel& model, const FeatureVector& x);
double predict(const SvrModel& model, const FeatureVector& x);
double predict(const NnModel& model, const FeatureVector& x);
double predict(const ValueModel& model, const FeatureVector& x);

// Plain-text serialization: a kind line (ols|svr|nn) followed by flat
// parameter arrays at 17 significant digits, so values round-trip exactly.
void save_model(std::ostream& out, const ValueModel& model);
ValueModel load_model(std::istream& in);

}  // namespace snes
