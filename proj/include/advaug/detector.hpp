#pragma once

#include <Eigen/Core>
#include <cmath>
#include <memory>
#include <string>

#include "advaug/featurizer.hpp"
#include "advaug/types.hpp"

namespace advaug {

// Numerically stable logistic function; output clamped to the open interval.
inline double sigmoid(double z) {
  double p;
  if (z >= 0.0) {
    const double e = std::exp(-z);
    p = 1.0 / (1.0 + e);
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  constexpr double kEps = 1e-15;
  return std::min(1.0 - kEps, std::max(kEps, p));
}

// Binary cross-entropy in logit form: max(z,0) - z*y + log(1 + exp(-|z|)).
inline double bce_loss(double logit, double label) {
  return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

// dL/dz of the above.
inline double bce_grad_logit(double logit, double label) { return sigmoid(logit) - label; }

struct TrainConfig {
  // Default tuned for a from-scratch linear head; the 1e-5 rate used for full
  // encoder fine-tuning stalls here but remains settable.
  double learning_rate = 1e-3;
  std::size_t batch_size = 8;
  int epochs_per_round = 1;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// Logistic head over a pluggable featurizer, trained with mini-batch BCE and
// decoupled weight decay (AdamW). Prediction is read-only and safe
// concurrently; training requires exclusive access.
class Detector {
 public:
  explicit Detector(std::shared_ptr<const Featurizer> featurizer);

  double predict_logit(std::string_view text) const;
  double predict_proba(std::string_view text) const { return sigmoid(predict_logit(text)); }
  std::vector<double> predict_all(const Dataset& data) const;

  // AUC of predict_proba over the dataset.
  double evaluate(const Dataset& data) const;

  // epochs_per_round full passes of shuffled mini-batch AdamW on BCE.
  // The pass order is derived from item ids plus the seed, so training does
  // not depend on the dataset's storage order. Throws on single-class data or
  // a non-finite batch loss.
  void train_epochs(const Dataset& data, const TrainConfig& cfg);

  // One AdamW update: bias-corrected moments, decoupled weight decay on the
  // weights only.
  void adamw_step(const Eigen::VectorXd& grad_weights, double grad_bias, const TrainConfig& cfg);

  const Featurizer& featurizer() const { return *featurizer_; }
  std::shared_ptr<const Featurizer> featurizer_ptr() const { return featurizer_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double bias() const { return bias_; }
  std::uint64_t optimizer_step() const { return step_; }

  void save(const std::string& path) const;
  static Detector load(const std::string& path);

  bool same_parameters(const Detector& other) const;

 private:
  std::shared_ptr<const Featurizer> featurizer_;
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
  // AdamW state.
  Eigen::VectorXd moment1_;
  Eigen::VectorXd moment2_;
  double bias_moment1_ = 0.0;
  double bias_moment2_ = 0.0;
  std::uint64_t step_ = 0;
};

}  // namespace advaug
