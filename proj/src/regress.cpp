#include "snes/regress.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace snes {

namespace {

constexpr int kDim = kFeatureCount;

double relu(double x) { return x > 0.0 ? x : 0.0; }

// Squared log error with both sides clamped at zero, as the reference deep
// learning stacks compute it. Negative targets all map to log1p(0); that
// keeps the loss total without distorting the positive range, and the
// resulting value models stay flat over loss-making regions instead of
// extrapolating them.
double msle_point(double pred, double target) {
  const double diff =
      std::log1p(std::max(pred, 0.0)) - std::log1p(std::max(target, 0.0));
  return diff * diff;
}

// d/dp of msle_point.
double msle_dloss(double pred, double target) {
  if (pred <= 0.0) return 0.0;
  return 2.0 * (std::log1p(pred) - std::log1p(std::max(target, 0.0))) /
         (1.0 + pred);
}

}  // namespace

// ---------------------------------------------------------------------------
// OLS
// ---------------------------------------------------------------------------

namespace {

// Gaussian elimination with partial pivoting on an n x n system.
// Returns false when a pivot is numerically zero.
bool solve_linear_system(std::vector<double> a, std::vector<double> rhs,
                         int n, std::vector<double>& out) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col]))
        pivot = row;
    if (std::abs(a[pivot * n + col]) < 1e-12) return false;
    if (pivot != col) {
      for (int k = col; k < n; ++k)
        std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(rhs[col], rhs[pivot]);
    }
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
      rhs[row] -= f * rhs[col];
    }
  }
  out.assign(n, 0.0);
  for (int row = n - 1; row >= 0; --row) {
    double acc = rhs[row];
    for (int k = row + 1; k < n; ++k) acc -= a[row * n + k] * out[k];
    out[row] = acc / a[row * n + row];
  }
  return true;
}

}  // namespace

LinearModel fit_ols(const std::vector<TrainingSample>& samples,
                    bool allow_ridge_fallback) {
  const int n_params = kDim + 1;
  if (static_cast<int>(samples.size()) < n_params)
    throw std::invalid_argument("fit_ols: need at least 6 samples");

  // Normal equations (X^T X) beta = X^T y with a leading ones column.
  std::vector<double> xtx(n_params * n_params, 0.0);
  std::vector<double> xty(n_params, 0.0);
  for (const TrainingSample& s : samples) {
    std::array<double, 6> row{1.0, s.x[0], s.x[1], s.x[2], s.x[3], s.x[4]};
    for (int i = 0; i < n_params; ++i) {
      xty[i] += row[i] * s.y;
      for (int j = 0; j < n_params; ++j)
        xtx[i * n_params + j] += row[i] * row[j];
    }
  }

  std::vector<double> beta;
  if (!solve_linear_system(xtx, xty, n_params, beta)) {
    if (!allow_ridge_fallback)
      throw std::runtime_error(
          "fit_ols: singular normal matrix (rank-deficient design)");
    double trace = 0.0;
    for (int i = 0; i < n_params; ++i) trace += xtx[i * n_params + i];
    // Small enough not to disturb well-determined coefficients; escalated
    // tenfold until the damped system solves.
    double ridge = std::max(1e-13 * trace / n_params, 1e-13);
    for (int attempt = 0; attempt < 8; ++attempt, ridge *= 10.0) {
      std::vector<double> damped = xtx;
      for (int i = 0; i < n_params; ++i) damped[i * n_params + i] += ridge;
      if (solve_linear_system(damped, xty, n_params, beta)) break;
      if (attempt == 7)
        throw std::runtime_error("fit_ols: ridge fallback failed to converge");
    }
  }

  LinearModel model;
  std::copy(beta.begin(), beta.end(), model.beta.begin());
  return model;
}

// ---------------------------------------------------------------------------
// Linear SVR
// ---------------------------------------------------------------------------

double svr_primal_objective(const SvrModel& model,
                            const std::vector<TrainingSample>& samples) {
  double reg = 0.0;
  for (const double w : model.weights) reg += w * w;
  double loss = 0.0;
  for (const TrainingSample& s : samples) {
    const double resid = std::abs(s.y - predict(model, s.x));
    loss += std::max(0.0, resid - model.hyper.epsilon);
  }
  return 0.5 * reg + model.hyper.penalty * loss;
}

SvrModel fit_linear_svr(const std::vector<TrainingSample>& samples,
                        const SvrHyperParams& hyper) {
  if (samples.empty())
    throw std::invalid_argument("fit_linear_svr: empty sample set");
  if (hyper.penalty <= 0.0 || hyper.max_iter <= 0 || hyper.tol <= 0.0 ||
      hyper.epsilon < 0.0)
    throw std::invalid_argument("fit_linear_svr: invalid hyperparameters");
  const std::size_t n = samples.size();

  // Standardize features and labels; the tube width scales with the labels.
  std::array<double, kDim> mean{}, sdev{};
  for (const TrainingSample& s : samples)
    for (int j = 0; j < kDim; ++j) mean[j] += s.x[j];
  for (int j = 0; j < kDim; ++j) mean[j] /= static_cast<double>(n);
  for (const TrainingSample& s : samples)
    for (int j = 0; j < kDim; ++j) {
      const double d = s.x[j] - mean[j];
      sdev[j] += d * d;
    }
  for (int j = 0; j < kDim; ++j) {
    sdev[j] = std::sqrt(sdev[j] / static_cast<double>(n));
    if (sdev[j] == 0.0) sdev[j] = 1.0;
  }
  double y_mean = 0.0;
  for (const TrainingSample& s : samples) y_mean += s.y;
  y_mean /= static_cast<double>(n);
  double y_var = 0.0;
  for (const TrainingSample& s : samples)
    y_var += (s.y - y_mean) * (s.y - y_mean);
  double y_sdev = std::sqrt(y_var / static_cast<double>(n));
  if (y_sdev == 0.0) y_sdev = 1.0;

  std::vector<std::array<double, kDim>> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < kDim; ++j)
      xs[i][j] = (samples[i].x[j] - mean[j]) / sdev[j];
    ys[i] = (samples[i].y - y_mean) / y_sdev;
  }
  const double eps_scaled = hyper.epsilon / y_sdev;

  // Start from the zero hyperplane through the median label: already optimal
  // whenever every residual sits inside the tube.
  std::vector<double> sorted_y = ys;
  std::nth_element(sorted_y.begin(), sorted_y.begin() + n / 2, sorted_y.end());
  std::array<double, kDim> w{};
  double b = sorted_y[n / 2];

  auto scaled_objective = [&](const std::array<double, kDim>& wv, double bv) {
    double reg = 0.0;
    for (const double v : wv) reg += v * v;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double pred = bv;
      for (int j = 0; j < kDim; ++j) pred += wv[j] * xs[i][j];
      loss += std::max(0.0, std::abs(ys[i] - pred) - eps_scaled);
    }
    return 0.5 * reg + hyper.penalty * loss;
  };

  std::array<double, kDim> best_w = w;
  double best_b = b;
  double best_obj = scaled_objective(w, b);
  double prev_obj = best_obj;

  for (int iter = 1; iter <= hyper.max_iter; ++iter) {
    // Subgradient of the per-sample mean objective; the 1/n keeps the step
    // scale independent of the sample count.
    std::array<double, kDim> grad{};
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double pred = b;
      for (int j = 0; j < kDim; ++j) pred += w[j] * xs[i][j];
      const double resid = ys[i] - pred;
      if (std::abs(resid) > eps_scaled) {
        const double sign = resid > 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < kDim; ++j) grad[j] += sign * xs[i][j];
        grad_b += sign;
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int j = 0; j < kDim; ++j)
      grad[j] = w[j] * inv_n + hyper.penalty * grad[j] * inv_n;
    grad_b = hyper.penalty * grad_b * inv_n;

    const double step = 1.0 / (hyper.penalty * iter);
    for (int j = 0; j < kDim; ++j) w[j] -= step * grad[j];
    b -= step * grad_b;

    const double obj = scaled_objective(w, b);
    if (obj < best_obj) {
      best_obj = obj;
      best_w = w;
      best_b = b;
    }
    if (std::abs(prev_obj - obj) < hyper.tol) break;
    prev_obj = obj;
  }

  // Map the standardized hyperplane back to raw units.
  SvrModel model;
  model.hyper = hyper;
  double bias = y_sdev * best_b + y_mean;
  for (int j = 0; j < kDim; ++j) {
    model.weights[j] = y_sdev * best_w[j] / sdev[j];
    bias -= model.weights[j] * mean[j];
  }
  model.bias = bias;
  model.objective = svr_primal_objective(model, samples);
  return model;
}

// ---------------------------------------------------------------------------
// Neural network
// ---------------------------------------------------------------------------

bool NnModel::shapes_valid() const {
  return w1.size() == kNnHidden * kDim && b1.size() == kNnHidden &&
         w2.size() == kNnHidden * kNnHidden && b2.size() == kNnHidden &&
         w3.size() == kNnHidden && b3.size() == 1;
}

NnModel nn_init(std::uint64_t seed) {
  NnModel m;
  RngStream rng = derive_stream(seed, "nn-init");
  auto glorot = [&](std::size_t rows, std::size_t cols) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::vector<double> w(rows * cols);
    for (double& v : w) v = (2.0 * rng.uniform01() - 1.0) * bound;
    return w;
  };
  m.w1 = glorot(kNnHidden, kDim);
  m.b1.assign(kNnHidden, 0.0);
  m.w2 = glorot(kNnHidden, kNnHidden);
  m.b2.assign(kNnHidden, 0.0);
  m.w3 = glorot(1, kNnHidden);
  m.b3.assign(1, 0.0);
  return m;
}

namespace {

struct ForwardPass {
  std::array<double, kNnHidden> h1{}, h2{};       // post-activation
  std::array<double, kNnHidden> mask1{}, mask2{}; // dropout scale factors
  double out = 0.0;
};

ForwardPass nn_forward_pass(const NnModel& m, const FeatureVector& x,
                            bool training, RngStream* rng) {
  ForwardPass f;
  const double keep = 1.0 - m.dropout_rate;
  for (int i = 0; i < kNnHidden; ++i) {
    double acc = m.b1[i];
    for (int j = 0; j < kDim; ++j) acc += m.w1[i * kDim + j] * x[j];
    f.h1[i] = relu(acc);
    f.mask1[i] = 1.0;
    if (training && m.dropout_rate > 0.0)
      f.mask1[i] = (rng->uniform01() < keep) ? 1.0 / keep : 0.0;
    f.h1[i] *= f.mask1[i];
  }
  for (int i = 0; i < kNnHidden; ++i) {
    double acc = m.b2[i];
    for (int j = 0; j < kNnHidden; ++j) acc += m.w2[i * kNnHidden + j] * f.h1[j];
    f.h2[i] = relu(acc);
    f.mask2[i] = 1.0;
    if (training && m.dropout_rate > 0.0)
      f.mask2[i] = (rng->uniform01() < keep) ? 1.0 / keep : 0.0;
    f.h2[i] *= f.mask2[i];
  }
  f.out = m.b3[0];
  for (int j = 0; j < kNnHidden; ++j) f.out += m.w3[j] * f.h2[j];
  return f;
}

}  // namespace

double nn_forward(const NnModel& model, const FeatureVector& x, bool training,
                  RngStream* rng) {
  if (!model.shapes_valid())
    throw std::invalid_argument("nn_forward: inconsistent parameter shapes");
  if (training && model.dropout_rate > 0.0 && rng == nullptr)
    throw std::invalid_argument("nn_forward: training mode needs an rng");
  return nn_forward_pass(model, x, training, rng).out;
}

double nn_batch_loss(const NnModel& model,
                     const std::vector<TrainingSample>& batch) {
  double total = 0.0;
  for (const TrainingSample& s : batch)
    total += msle_point(nn_forward_pass(model, s.x, false, nullptr).out, s.y);
  return total / static_cast<double>(batch.size());
}

double nn_loss_and_gradients(const NnModel& model,
                             const std::vector<TrainingSample>& batch,
                             NnGradients& grads, RngStream* dropout_rng) {
  if (batch.empty())
    throw std::invalid_argument("nn_loss_and_gradients: empty batch");
  grads.w1.assign(model.w1.size(), 0.0);
  grads.b1.assign(model.b1.size(), 0.0);
  grads.w2.assign(model.w2.size(), 0.0);
  grads.b2.assign(model.b2.size(), 0.0);
  grads.w3.assign(model.w3.size(), 0.0);
  grads.b3.assign(model.b3.size(), 0.0);

  const bool training = dropout_rng != nullptr;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;

  for (const TrainingSample& s : batch) {
    const ForwardPass f = nn_forward_pass(model, s.x, training, dropout_rng);
    total += msle_point(f.out, s.y);
    const double dout = msle_dloss(f.out, s.y) * inv_batch;
    if (dout == 0.0) continue;

    grads.b3[0] += dout;
    std::array<double, kNnHidden> dh2{};
    for (int j = 0; j < kNnHidden; ++j) {
      grads.w3[j] += dout * f.h2[j];
      dh2[j] = dout * model.w3[j];
    }
    std::array<double, kNnHidden> dh1{};
    for (int i = 0; i < kNnHidden; ++i) {
      // Backward through dropout and the rectifier: h2[i] > 0 iff the
      // pre-activation was positive and the unit was kept.
      const double da = (f.h2[i] > 0.0) ? dh2[i] * f.mask2[i] : 0.0;
      if (da == 0.0) continue;
      grads.b2[i] += da;
      for (int j = 0; j < kNnHidden; ++j) {
        grads.w2[i * kNnHidden + j] += da * f.h1[j];
        dh1[j] += da * model.w2[i * kNnHidden + j];
      }
    }
    for (int i = 0; i < kNnHidden; ++i) {
      const double da = (f.h1[i] > 0.0) ? dh1[i] * f.mask1[i] : 0.0;
      if (da == 0.0) continue;
      grads.b1[i] += da;
      for (int j = 0; j < kDim; ++j) grads.w1[i * kDim + j] += da * s.x[j];
    }
  }
  return total * inv_batch;
}

double AdamState::update(double grad, long step_count, const AdamConfig& cfg) {
  m = cfg.decay1 * m + (1.0 - cfg.decay1) * grad;
  v = cfg.decay2 * v + (1.0 - cfg.decay2) * grad * grad;
  const double m_hat = m / (1.0 - std::pow(cfg.decay1, step_count));
  const double v_hat = v / (1.0 - std::pow(cfg.decay2, step_count));
  return -cfg.step * m_hat / (std::sqrt(v_hat) + cfg.stabilizer);
}

void TrainConfig::validate() const {
  if (batch_size <= 0 || epochs <= 0)
    throw std::invalid_argument("TrainConfig: batch_size/epochs must be > 0");
  if (train_fraction <= 0.0 || train_fraction >= 1.0 ||
      validation_fraction <= 0.0 || validation_fraction >= 1.0)
    throw std::invalid_argument("TrainConfig: fractions must lie in (0, 1)");
  if (adam.step <= 0.0 || adam.stabilizer <= 0.0 || adam.decay1 <= 0.0 ||
      adam.decay1 >= 1.0 || adam.decay2 <= 0.0 || adam.decay2 >= 1.0)
    throw std::invalid_argument("TrainConfig: invalid Adam constants");
}

namespace {

struct AdamTensors {
  std::vector<AdamState> w1, b1, w2, b2, w3, b3;
  explicit AdamTensors(const NnModel& m)
      : w1(m.w1.size()), b1(m.b1.size()), w2(m.w2.size()), b2(m.b2.size()),
        w3(m.w3.size()), b3(m.b3.size()) {}
};

void apply_adam(std::vector<double>& param, const std::vector<double>& grad,
                std::vector<AdamState>& state, long step_count,
                const AdamConfig& cfg) {
  for (std::size_t i = 0; i < param.size(); ++i)
    param[i] += state[i].update(grad[i], step_count, cfg);
}

}  // namespace

NnModel nn_train(const std::vector<TrainingSample>& samples,
                 const TrainConfig& cfg, NnTrainReport* report) {
  cfg.validate();
  if (static_cast<int>(samples.size()) < cfg.batch_size)
    throw std::invalid_argument(
        "nn_train: need at least batch_size samples");

  // The squared-log loss clamps negative values, so labels train in raw
  // units; the shift field stays for models built from offset label spaces.
  for (const TrainingSample& s : samples)
    if (!std::isfinite(s.y))
      throw std::invalid_argument("nn_train: labels must be finite");
  const double shift = 0.0;
  std::vector<TrainingSample> shifted = samples;

  // One seeded shuffle, then 70/30 train/test; the last fifth of the
  // training partition is held out for validation.
  RngStream split_rng = derive_stream(cfg.seed, "nn-split");
  for (std::size_t i = shifted.size(); i > 1; --i)
    std::swap(shifted[i - 1],
              shifted[split_rng.uniform_int(0, static_cast<int>(i) - 1)]);
  const std::size_t n_train_pool = std::max<std::size_t>(
      1, static_cast<std::size_t>(cfg.train_fraction * shifted.size()));
  std::vector<TrainingSample> pool(shifted.begin(),
                                   shifted.begin() + n_train_pool);
  std::vector<TrainingSample> test(shifted.begin() + n_train_pool,
                                   shifted.end());
  std::size_t n_val = static_cast<std::size_t>(
      cfg.validation_fraction * pool.size());
  n_val = std::min(n_val, pool.size() - 1);
  std::vector<TrainingSample> val(pool.end() - n_val, pool.end());
  pool.resize(pool.size() - n_val);

  NnModel model = nn_init(cfg.seed);
  model.label_shift = shift;
  AdamTensors adam(model);
  RngStream shuffle_rng = derive_stream(cfg.seed, "nn-shuffle");
  RngStream dropout_rng = derive_stream(cfg.seed, "nn-dropout");

  NnModel best = model;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  long step_count = 0;
  NnTrainReport local_report;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1],
                pool[shuffle_rng.uniform_int(0, static_cast<int>(i) - 1)]);

    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    NnGradients grads;
    for (std::size_t start = 0; start < pool.size();
         start += cfg.batch_size) {
      const std::size_t end =
          std::min(start + cfg.batch_size, pool.size());
      const std::vector<TrainingSample> batch(pool.begin() + start,
                                              pool.begin() + end);
      epoch_loss += nn_loss_and_gradients(model, batch, grads, &dropout_rng);
      ++n_batches;
      ++step_count;
      apply_adam(model.w1, grads.w1, adam.w1, step_count, cfg.adam);
      apply_adam(model.b1, grads.b1, adam.b1, step_count, cfg.adam);
      apply_adam(model.w2, grads.w2, adam.w2, step_count, cfg.adam);
      apply_adam(model.b2, grads.b2, adam.b2, step_count, cfg.adam);
      apply_adam(model.w3, grads.w3, adam.w3, step_count, cfg.adam);
      apply_adam(model.b3, grads.b3, adam.b3, step_count, cfg.adam);
    }

    // With no validation rows (tiny inputs) the last epoch wins.
    const double val_loss = val.empty() ? -epoch : nn_batch_loss(model, val);
    local_report.train_msle.push_back(epoch_loss /
                                      std::max<std::size_t>(1, n_batches));
    local_report.val_msle.push_back(val.empty() ? 0.0 : val_loss);
    if (val_loss < best_val) {
      best_val = val_loss;
      best = model;
      best_epoch = epoch;
    }
  }

  best.label_shift = shift;
  if (report != nullptr) {
    *report = std::move(local_report);
    report->best_epoch = best_epoch;
    report->best_val_msle = val.empty() ? 0.0 : best_val;
    report->final_train_msle = nn_batch_loss(best, pool);
    report->test_msle = test.empty() ? 0.0 : nn_batch_loss(best, test);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Prediction and serialization
// ---------------------------------------------------------------------------

double predict(const LinearModel& model, const FeatureVector& x) {
  double acc = model.beta[0];
  for (int j = 0; j < kDim; ++j) acc += model.beta[j + 1] * x[j];
  return acc;
}

double predict(const SvrModel& model, const FeatureVector& x) {
  double acc = model.bias;
  for (int j = 0; j < kDim; ++j) acc += model.weights[j] * x[j];
  return acc;
}

double predict(const NnModel& model, const FeatureVector& x) {
  return nn_forward(model, x, false) + model.label_shift;
}

double predict(const ValueModel& model, const FeatureVector& x) {
  return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

namespace {

void write_values(std::ostream& out, const char* name,
                  const double* values, std::size_t count) {
  out << name;
  char buf[64];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, " %.17g", values[i]);
    out << buf;
  }
  out << '\n';
}

std::vector<double> read_values(std::istream& in, const std::string& expect,
                                std::size_t count) {
  std::string name;
  if (!(in >> name) || name != expect)
    throw std::runtime_error("load_model: expected field '" + expect + "'");
  std::vector<double> values(count);
  for (double& v : values)
    if (!(in >> v))
      throw std::runtime_error("load_model: truncated field '" + expect + "'");
  return values;
}

}  // namespace

void save_model(std::ostream& out, const ValueModel& model) {
  if (const auto* m = std::get_if<LinearModel>(&model)) {
    out << "kind ols\n";
    write_values(out, "beta", m->beta.data(), m->beta.size());
  } else if (const auto* m = std::get_if<SvrModel>(&model)) {
    out << "kind svr\n";
    write_values(out, "weights", m->weights.data(), m->weights.size());
    write_values(out, "bias", &m->bias, 1);
    const double hyper[4] = {m->hyper.penalty, m->hyper.epsilon,
                             static_cast<double>(m->hyper.max_iter),
                             m->hyper.tol};
    write_values(out, "hyper", hyper, 4);
    write_values(out, "objective", &m->objective, 1);
  } else {
    const auto& nn = std::get<NnModel>(model);
    out << "kind nn\n";
    write_values(out, "w1", nn.w1.data(), nn.w1.size());
    write_values(out, "b1", nn.b1.data(), nn.b1.size());
    write_values(out, "w2", nn.w2.data(), nn.w2.size());
    write_values(out, "b2", nn.b2.data(), nn.b2.size());
    write_values(out, "w3", nn.w3.data(), nn.w3.size());
    write_values(out, "b3", nn.b3.data(), nn.b3.size());
    write_values(out, "dropout", &nn.dropout_rate, 1);
    write_values(out, "label_shift", &nn.label_shift, 1);
  }
}

ValueModel load_model(std::istream& in) {
  std::string field, kind;
  if (!(in >> field >> kind) || field != "kind")
    throw std::runtime_error("load_model: missing kind header");
  if (kind == "ols") {
    LinearModel m;
    const auto beta = read_values(in, "beta", m.beta.size());
    std::copy(beta.begin(), beta.end(), m.beta.begin());
    return m;
  }
  if (kind == "svr") {
    SvrModel m;
    const auto w = read_values(in, "weights", m.weights.size());
    std::copy(w.begin(), w.end(), m.weights.begin());
    m.bias = read_values(in, "bias", 1)[0];
    const auto hyper = read_values(in, "hyper", 4);
    m.hyper.penalty = hyper[0];
    m.hyper.epsilon = hyper[1];
    m.hyper.max_iter = static_cast<int>(hyper[2]);
    m.hyper.tol = hyper[3];
    m.objective = read_values(in, "objective", 1)[0];
    return m;
  }
  if (kind == "nn") {
    NnModel m;
    m.w1 = read_values(in, "w1", kNnHidden * kDim);
    m.b1 = read_values(in, "b1", kNnHidden);
    m.w2 = read_values(in, "w2", kNnHidden * kNnHidden);
    m.b2 = read_values(in, "b2", kNnHidden);
    m.w3 = read_values(in, "w3", kNnHidden);
    m.b3 = read_values(in, "b3", 1);
    m.dropout_rate = read_values(in, "dropout", 1)[0];
    m.label_shift = read_values(in, "label_shift", 1)[0];
    return m;
  }
  throw std::runtime_error("load_model: unknown model kind '" + kind + "'");
}

}  // namespace snes
