#pragma once

#include "pxbar/ann.hpp"
#include "pxbar/dataset.hpp"
#include "pxbar/energy.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace pxbar {

// Weight fixture: '#' comment lines, then a `rows,cols,activation` line,
// then `rows` lines of `cols` comma-separated weights (row-major).
struct WeightsFixture {
  Eigen::MatrixXd weights;
  Activation activation = Activation::None;
};

WeightsFixture read_weights_fixture(const std::string& path);
void write_weights_fixture(const std::string& path, const WeightsFixture& fixture,
                           const std::string& comment_line);

// Labelled samples: header line, one sample per row, optional `label` column.
struct LabelledSamples {
  std::vector<std::string> columns;  // feature column names
  Eigen::MatrixXd features;
  std::vector<int> labels;  // empty when the file has no label column
};

LabelledSamples read_samples(const std::string& path);
void write_samples(const std::string& path, const Dataset& data, const std::string& comment_line);

std::vector<LayerMapping> map_network(const FloatNetwork& net, const DeviceParams& params,
                                      double r_row = 0.0, double r_col = 0.0);

std::vector<int> reference_predictions(const FloatNetwork& net, const Eigen::MatrixXd& features);

struct Evaluation {
  std::vector<int> predictions;
  Eigen::MatrixXd outputs;  // one row per sample
  bool saturated = false;
  Trace trace;
};

Evaluation evaluate(const CrossbarNetwork& network, const Eigen::MatrixXd& features);

// End-to-end blobs run: float accuracy, exact-conductance ideal accuracy, and
// program-and-verify + wire-resistance accuracy at each requested tolerance.
struct BlobsRunSpec {
  std::uint64_t seed = 7;
  double r_wire = 1.0;  // ohm per segment, rows and columns
  std::vector<double> tolerances{0.01};
  std::size_t max_pulses = 64;
  ReadSettings read{0.2, 0.2, 1e-9};
  BlobsSpec blobs;
  TrainSpec train;
};

struct TolerancePoint {
  double tol = 0.0;
  double accuracy = 0.0;
  std::size_t failed_cells = 0;
  EnergyReport energy;  // programming + inference
};

struct BlobsRunResult {
  BlobsSplit data;
  FloatNetwork network;
  double float_accuracy = 0.0;
  double ideal_accuracy = 0.0;
  EnergyReport ideal_energy;
  std::vector<TolerancePoint> nonideal;
};

BlobsRunResult run_blobs_experiment(const DeviceParams& params, const BlobsRunSpec& spec);

}  // namespace pxbar
