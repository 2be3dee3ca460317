#include "pxbar/dataset.hpp"

#include "pxbar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace pxbar {

namespace {

Dataset sample_blobs(std::mt19937_64& rng, const BlobsSpec& spec, int per_class) {
  std::normal_distribution<double> noise(0.0, spec.spread);
  Dataset d;
  d.features.resize(static_cast<Eigen::Index>(spec.classes) * per_class, 3);
  Eigen::Index row = 0;
  for (int c = 0; c < spec.classes; ++c) {
    const double angle = 2.0 * std::numbers::pi * c / spec.classes;
    const double cx = spec.radius * std::cos(angle);
    const double cy = spec.radius * std::sin(angle);
    for (int i = 0; i < per_class; ++i, ++row) {
      const double x = cx + noise(rng);
      const double y = cy + noise(rng);
      d.features.row(row) << x, y, 1.0;
      d.labels.push_back(c);
    }
  }
  return d;
}

}  // namespace

BlobsSplit make_blobs(std::uint64_t seed, const BlobsSpec& spec) {
  if (spec.classes < 2 || spec.train_per_class < 1 || spec.test_per_class < 1) {
    throw DomainError("blobs need >= 2 classes and >= 1 sample per class");
  }
  std::mt19937_64 rng(seed);
  BlobsSplit split{sample_blobs(rng, spec, spec.train_per_class),
                   sample_blobs(rng, spec, spec.test_per_class)};
  const double scale = split.train.features.leftCols(2).cwiseAbs().maxCoeff();
  for (auto* d : {&split.train, &split.test}) {
    d->features.leftCols(2) /= scale;
    d->features.leftCols(2) = d->features.leftCols(2).cwiseMax(-1.0).cwiseMin(1.0);
  }
  return split;
}

FloatNetwork train_classifier(const Dataset& train, int classes, std::uint64_t seed,
                              const TrainSpec& spec) {
  const Eigen::Index n = train.size();
  const Eigen::Index inputs = train.features.cols();
  if (n == 0) throw DomainError("empty training set");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> init(0.0, 1.0);
  Eigen::MatrixXd w1(inputs, spec.hidden);
  Eigen::MatrixXd w2(spec.hidden, classes);
  for (Eigen::Index i = 0; i < w1.size(); ++i) w1.data()[i] = init(rng) / std::sqrt(double(inputs));
  for (Eigen::Index i = 0; i < w2.size(); ++i) w2.data()[i] = init(rng) / std::sqrt(double(spec.hidden));

  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, classes);
  for (Eigen::Index i = 0; i < n; ++i) onehot(i, train.labels[static_cast<std::size_t>(i)]) = 1.0;

  const Eigen::MatrixXd& x = train.features;
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    const Eigen::MatrixXd h = (x * w1).array().tanh().matrix();
    Eigen::MatrixXd logits = h * w2;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mx = logits.row(i).maxCoeff();
      logits.row(i) = (logits.row(i).array() - mx).exp().matrix();
      logits.row(i) /= logits.row(i).sum();
    }
    const Eigen::MatrixXd d_logits = (logits - onehot) / static_cast<double>(n);
    const Eigen::MatrixXd d_w2 = h.transpose() * d_logits;
    const Eigen::MatrixXd d_h = (d_logits * w2.transpose()).array() * (1.0 - h.array().square());
    const Eigen::MatrixXd d_w1 = x.transpose() * d_h;
    w1 -= spec.learning_rate * d_w1;
    w2 -= spec.learning_rate * d_w2;
  }
  return {{w1, w2}, {Activation::Tanh, Activation::None}};
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& labels) {
  if (predicted.size() != labels.size() || labels.empty()) {
    throw DimensionError("accuracy needs equal, non-empty prediction and label lists");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

}  // namespace pxbar
