#include "advaug/detector.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "advaug/metrics.hpp"
#include "advaug/text.hpp"

namespace advaug {

using nlohmann::json;

void TrainConfig::validate() const {
  if (learning_rate <= 0 || weight_decay < 0 || batch_size == 0 || epochs_per_round < 0) {
    throw std::invalid_argument("train config: rates and counts must be positive");
  }
  if (beta1 <= 0 || beta1 >= 1 || beta2 <= 0 || beta2 >= 1 || epsilon <= 0) {
    throw std::invalid_argument("train config: invalid optimizer constants");
  }
}

Detector::Detector(std::shared_ptr<const Featurizer> featurizer)
    : featurizer_(std::move(featurizer)),
      weights_(Eigen::VectorXd::Zero(featurizer_->dimension())),
      moment1_(Eigen::VectorXd::Zero(featurizer_->dimension())),
      moment2_(Eigen::VectorXd::Zero(featurizer_->dimension())) {}

double Detector::predict_logit(std::string_view text) const {
  return weights_.dot(featurizer_->featurize(text)) + bias_;
}

std::vector<double> Detector::predict_all(const Dataset& data) const {
  std::vector<double> scores;
  scores.reserve(data.size());
  for (const auto& item : data.items) scores.push_back(predict_proba(item.text));
  return scores;
}

double Detector::evaluate(const Dataset& data) const {
  return auc(scored_predictions_from(data, predict_all(data)));
}

void Detector::train_epochs(const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) {
    throw std::invalid_argument("train_epochs: empty dataset");
  }
  if (!data.has_both_classes()) {
    throw std::invalid_argument("train_epochs: both classes required");
  }
  if (cfg.batch_size > data.size()) {
    throw std::invalid_argument("train_epochs: batch_size exceeds dataset size");
  }

  // Canonical order by id, so the seeded shuffle is the only order-dependent
  // step.
  std::vector<std::size_t> base_order(data.size());
  std::iota(base_order.begin(), base_order.end(), 0);
  std::sort(base_order.begin(), base_order.end(), [&](std::size_t a, std::size_t b) {
    return data.items[a].id < data.items[b].id;
  });

  const Eigen::Index dim = weights_.size();
  Eigen::VectorXd grad_w(dim);

  for (int epoch = 0; epoch < cfg.epochs_per_round; ++epoch) {
    std::vector<std::size_t> order = base_order;
    Rng rng(derive_seed(cfg.seed, "epoch-shuffle", static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);

    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(begin + cfg.batch_size, order.size());
      const double batch_n = static_cast<double>(end - begin);

      grad_w.setZero();
      double grad_b = 0.0;
      double loss = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const NewsItem& item = data.items[order[i]];
        const Eigen::VectorXd x = featurizer_->featurize(item.text);
        const double z = weights_.dot(x) + bias_;
        const double y = static_cast<double>(to_int(item.label));
        loss += bce_loss(z, y);
        const double g = bce_grad_logit(z, y) / batch_n;
        grad_w.noalias() += g * x;
        grad_b += g;
      }
      loss /= batch_n;
      if (!std::isfinite(loss)) {
        throw std::runtime_error("train_epochs: non-finite loss at epoch " + std::to_string(epoch) +
                                 ", batch " + std::to_string(batch_index));
      }

      adamw_step(grad_w, grad_b, cfg);
    }
  }
}

void Detector::adamw_step(const Eigen::VectorXd& grad_weights, double grad_bias,
                          const TrainConfig& cfg) {
  if (grad_weights.size() != weights_.size()) {
    throw std::invalid_argument("adamw_step: gradient dimension mismatch");
  }
  ++step_;
  const double t = static_cast<double>(step_);
  const double corr1 = 1.0 - std::pow(cfg.beta1, t);
  const double corr2 = 1.0 - std::pow(cfg.beta2, t);

  moment1_ = cfg.beta1 * moment1_ + (1.0 - cfg.beta1) * grad_weights;
  moment2_.array() = cfg.beta2 * moment2_.array() + (1.0 - cfg.beta2) * grad_weights.array().square();
  weights_.array() -= cfg.learning_rate *
                      ((moment1_.array() / corr1) / ((moment2_.array() / corr2).sqrt() + cfg.epsilon) +
                       cfg.weight_decay * weights_.array());

  bias_moment1_ = cfg.beta1 * bias_moment1_ + (1.0 - cfg.beta1) * grad_bias;
  bias_moment2_ = cfg.beta2 * bias_moment2_ + (1.0 - cfg.beta2) * grad_bias * grad_bias;
  bias_ -=
      cfg.learning_rate * (bias_moment1_ / corr1) / (std::sqrt(bias_moment2_ / corr2) + cfg.epsilon);
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

void Detector::save(const std::string& path) const {
  json j;
  j["schema_version"] = 1;
  j["featurizer"] = featurizer_->config();
  j["weights"] = vector_to_json(weights_);
  j["bias"] = bias_;
  j["moment1"] = vector_to_json(moment1_);
  j["moment2"] = vector_to_json(moment2_);
  j["bias_moment1"] = bias_moment1_;
  j["bias_moment2"] = bias_moment2_;
  j["step"] = step_;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write detector: " + path);
  out << j.dump() << '\n';
}

Detector Detector::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open detector: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("detector parse error in " + path + ": " + e.what());
  }
  const int version = j.at("schema_version").get<int>();
  if (version != 1) {
    throw std::runtime_error("detector schema version mismatch: expected 1, found " +
                             std::to_string(version));
  }
  Detector d(featurizer_from_json(j.at("featurizer")));
  d.weights_ = vector_from_json(j.at("weights"));
  d.moment1_ = vector_from_json(j.at("moment1"));
  d.moment2_ = vector_from_json(j.at("moment2"));
  if (d.weights_.size() != d.featurizer_->dimension()) {
    throw std::runtime_error("detector weights do not match featurizer dimension");
  }
  d.bias_ = j.at("bias").get<double>();
  d.bias_moment1_ = j.at("bias_moment1").get<double>();
  d.bias_moment2_ = j.at("bias_moment2").get<double>();
  d.step_ = j.at("step").get<std::uint64_t>();
  return d;
}

bool Detector::same_parameters(const Detector& other) const {
  return weights_ == other.weights_ && bias_ == other.bias_ && moment1_ == other.moment1_ &&
         moment2_ == other.moment2_ && bias_moment1_ == other.bias_moment1_ &&
         bias_moment2_ == other.bias_moment2_ && step_ == other.step_;
}

}  // namespace advaug
