#pragma once

#include "pxbar/crossbar.hpp"
#include "pxbar/energy.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pxbar {

enum class Activation { None, Relu, Sigmoid, Tanh };
enum class ReadMode { Ideal, Nonideal };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view s);
std::string_view to_string(ReadMode m);
ReadMode parse_read_mode(std::string_view s);

double activation_apply(Activation kind, double z);

struct DifferentialTargets {
  Eigen::MatrixXd g_pos;
  Eigen::MatrixXd g_neg;
  double scale = 0.0;  // S per weight unit
  // Set when the weights were all zero and the fallback scale was used.
  std::string warning;
};

// One-sided differential encoding: a positive weight raises G+ above g_a,
// a negative one raises G-. scale = (g_c - g_a) / max|W|.
DifferentialTargets weights_to_conductances(const Eigen::MatrixXd& weights,
                                            const DeviceParams& params,
                                            double fallback_scale = 0.0);

Eigen::MatrixXd conductances_to_weights(const Eigen::MatrixXd& g_pos, const Eigen::MatrixXd& g_neg,
                                        double scale);

// A weight matrix (inputs x outputs) living on a pair of crossbar arrays.
struct LayerMapping {
  Eigen::MatrixXd weights;
  double scale = 0.0;
  std::shared_ptr<CrossbarArray> pos_array;
  std::shared_ptr<CrossbarArray> neg_array;
  Activation activation = Activation::None;
};

// Builds a mapping and writes the exact target conductances into fresh
// arrays (no pulses). Use program_mapping to go through program-and-verify.
LayerMapping map_layer(const Eigen::MatrixXd& weights, Activation activation,
                       const DeviceParams& params, const WaveguideCellGeometry& geom = {},
                       std::shared_ptr<const MaterialRecord> material = nullptr,
                       double r_row = 0.0, double r_col = 0.0);

// Resets both arrays of `mapping` and programs them to their targets.
ProgramReport program_mapping(LayerMapping& mapping, double tol, std::size_t max_pulses,
                              const ProgramOptions& options = {}, Trace* trace = nullptr);

struct ReadSettings {
  double v_read = 0.2;   // largest allowed |v| on a row, V
  double v_scale = 0.1;  // V per input unit
  double t_read = 1e-9;  // s per array read phase
};

struct ForwardResult {
  Eigen::VectorXd output;
  bool saturated = false;  // some encoded |v| exceeded v_read and was clipped
};

// Runs the network on the simulated hardware. Each layer reads both arrays
// twice (non-negative lobe, then negative lobe) and subtracts the currents.
// Nodal solvers are factorized once per array and reused across samples.
class CrossbarNetwork {
 public:
  CrossbarNetwork(std::vector<LayerMapping> layers, ReadMode mode, ReadSettings settings);

  ForwardResult forward(const Eigen::VectorXd& input, Trace* trace = nullptr) const;
  const std::vector<LayerMapping>& layers() const { return layers_; }

 private:
  Eigen::VectorXd read(std::size_t layer, bool negative_array, const Eigen::VectorXd& v) const;

  std::vector<LayerMapping> layers_;
  ReadMode mode_;
  ReadSettings settings_;
  std::vector<std::unique_ptr<NodalSolver>> solvers_;  // 2 per layer in nonideal mode
};

ForwardResult forward(const std::vector<LayerMapping>& mappings, const Eigen::VectorXd& input,
                      ReadMode mode, const ReadSettings& settings = {}, Trace* trace = nullptr);

// Floating-point reference: y = act(W^T x) layer by layer.
Eigen::VectorXd reference_forward(const std::vector<Eigen::MatrixXd>& weights,
                                  const std::vector<Activation>& activations,
                                  const Eigen::VectorXd& input);

Eigen::Index argmax(const Eigen::VectorXd& v);

}  // namespace pxbar
