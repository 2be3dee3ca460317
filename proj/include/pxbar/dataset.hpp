#pragma once

#include "pxbar/ann.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace pxbar {

struct Dataset {
  Eigen::MatrixXd features;  // one sample per row
  std::vector<int> labels;

  Eigen::Index size() const { return features.rows(); }
};

struct BlobsSpec {
  int classes = 3;
  int train_per_class = 100;
  int test_per_class = 100;
  double spread = 0.6;   // std-dev of each blob
  double radius = 1.6;   // blob centres sit on a circle of this radius
};

struct BlobsSplit {
  Dataset train;
  Dataset test;
};

// Seeded 2D Gaussian blobs. Features are divided by a constant so the train
// set fits in [-1, 1]; test points are clamped into the same box. A constant
// 1.0 bias column is appended as the last feature.
BlobsSplit make_blobs(std::uint64_t seed, const BlobsSpec& spec = {});

struct TrainSpec {
  int hidden = 8;
  int epochs = 800;
  double learning_rate = 0.5;
};

struct FloatNetwork {
  std::vector<Eigen::MatrixXd> weights;  // inputs x outputs per layer
  std::vector<Activation> activations;
};

// Full-batch gradient descent on softmax cross-entropy for a
// (features -> tanh hidden -> linear) network with seeded initialisation.
FloatNetwork train_classifier(const Dataset& train, int classes, std::uint64_t seed,
                              const TrainSpec& spec = {});

double accuracy(const std::vector<int>& predicted, const std::vector<int>& labels);

}  // namespace pxbar
