#include "pxbar/ann.hpp"

#include "pxbar/errors.hpp"

#include <cmath>

namespace pxbar {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::None: return "none";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
  }
  return "?";
}

Activation parse_activation(std::string_view s) {
  if (s == "none") return Activation::None;
  if (s == "relu") return Activation::Relu;
  if (s == "sigmoid") return Activation::Sigmoid;
  if (s == "tanh") return Activation::Tanh;
  throw SchemaError("unknown activation '" + std::string(s) + "'");
}

std::string_view to_string(ReadMode m) { return m == ReadMode::Ideal ? "ideal" : "nonideal"; }

ReadMode parse_read_mode(std::string_view s) {
  if (s == "ideal") return ReadMode::Ideal;
  if (s == "nonideal") return ReadMode::Nonideal;
  throw ConfigError("mode must be 'ideal' or 'nonideal', got '" + std::string(s) + "'");
}

double activation_apply(Activation kind, double z) {
  switch (kind) {
    case Activation::None: return z;
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Tanh: return std::tanh(z);
  }
  return z;
}

DifferentialTargets weights_to_conductances(const Eigen::MatrixXd& weights,
                                            const DeviceParams& params, double fallback_scale) {
  if (!weights.allFinite()) throw DomainError("weights must be finite");
  DifferentialTargets out;
  const double max_abs = weights.size() ? weights.cwiseAbs().maxCoeff() : 0.0;
  if (max_abs > 0.0) {
    out.scale = (params.g_c - params.g_a) / max_abs;
  } else {
    if (!(fallback_scale > 0.0)) {
      throw DomainError("all-zero weights and no positive fallback scale");
    }
    out.scale = fallback_scale;
    out.warning = "degenerate weights: all zero, using fallback scale";
  }
  out.g_pos = Eigen::MatrixXd::Constant(weights.rows(), weights.cols(), params.g_a);
  out.g_neg = out.g_pos;
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      const double w = weights(i, j);
      if (w > 0.0) out.g_pos(i, j) = params.g_a + out.scale * w;
      else if (w < 0.0) out.g_neg(i, j) = params.g_a + out.scale * -w;
    }
  }
  return out;
}

Eigen::MatrixXd conductances_to_weights(const Eigen::MatrixXd& g_pos, const Eigen::MatrixXd& g_neg,
                                        double scale) {
  if (!(scale > 0.0)) throw DomainError("weight scale must be > 0");
  if (g_pos.rows() != g_neg.rows() || g_pos.cols() != g_neg.cols()) {
    throw DimensionError("G+ and G- shapes differ");
  }
  return (g_pos - g_neg) / scale;
}

LayerMapping map_layer(const Eigen::MatrixXd& weights, Activation activation,
                       const DeviceParams& params, const WaveguideCellGeometry& geom,
                       std::shared_ptr<const MaterialRecord> material, double r_row,
                       double r_col) {
  const auto targets = weights_to_conductances(weights, params);
  LayerMapping mapping;
  mapping.weights = weights;
  mapping.scale = targets.scale;
  mapping.activation = activation;
  const auto rows = static_cast<std::size_t>(weights.rows());
  const auto cols = static_cast<std::size_t>(weights.cols());
  mapping.pos_array = std::make_shared<CrossbarArray>(rows, cols, params, geom, material, r_row, r_col);
  mapping.neg_array = std::make_shared<CrossbarArray>(rows, cols, params, geom, material, r_row, r_col);
  mapping.pos_array->set_conductances(targets.g_pos);
  mapping.neg_array->set_conductances(targets.g_neg);
  return mapping;
}

ProgramReport program_mapping(LayerMapping& mapping, double tol, std::size_t max_pulses,
                              const ProgramOptions& options, Trace* trace) {
  const auto& params = mapping.pos_array->params();
  const auto targets = weights_to_conductances(mapping.weights, params, mapping.scale);
  ProgramReport total;
  for (auto* array : {mapping.pos_array.get(), mapping.neg_array.get()}) {
    const auto& target = array == mapping.pos_array.get() ? targets.g_pos : targets.g_neg;
    for (std::size_t n = 0; n < array->rows(); ++n)
      for (std::size_t m = 0; m < array->cols(); ++m) {
        auto fresh = array->cell(n, m);
        fresh.s = 0.0;
        array->set_cell(n, m, fresh);
      }
    auto report = program_array(*array, target, tol, max_pulses, options, trace);
    total.total_pulses += report.total_pulses;
    total.total_energy += report.total_energy;
    total.cells.insert(total.cells.end(), report.cells.begin(), report.cells.end());
  }
  return total;
}

CrossbarNetwork::CrossbarNetwork(std::vector<LayerMapping> layers, ReadMode mode,
                                 ReadSettings settings)
    : layers_(std::move(layers)), mode_(mode), settings_(settings) {
  if (layers_.empty()) throw DimensionError("network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (!l.pos_array || !l.neg_array) throw DimensionError("layer without arrays");
    if (l.pos_array->rows() != static_cast<std::size_t>(l.weights.rows()) ||
        l.pos_array->cols() != static_cast<std::size_t>(l.weights.cols()) ||
        l.neg_array->rows() != l.pos_array->rows() || l.neg_array->cols() != l.pos_array->cols()) {
      throw DimensionError("layer " + std::to_string(i) + ": arrays do not match weights");
    }
    if (!(l.scale > 0.0)) throw DomainError("layer " + std::to_string(i) + ": scale must be > 0");
    if (i > 0 && layers_[i - 1].weights.cols() != l.weights.rows()) {
      throw DimensionError("layer " + std::to_string(i) + ": input width mismatch");
    }
  }
  if (mode_ == ReadMode::Nonideal) {
    for (const auto& l : layers_) {
      solvers_.push_back(std::make_unique<NodalSolver>(*l.pos_array));
      solvers_.push_back(std::make_unique<NodalSolver>(*l.neg_array));
    }
  }
}

Eigen::VectorXd CrossbarNetwork::read(std::size_t layer, bool negative_array,
                                      const Eigen::VectorXd& v) const {
  if (mode_ == ReadMode::Nonideal) return solvers_[2 * layer + (negative_array ? 1 : 0)]->solve(v);
  const auto& l = layers_[layer];
  return vmm_ideal(negative_array ? *l.neg_array : *l.pos_array, v);
}

ForwardResult CrossbarNetwork::forward(const Eigen::VectorXd& input, Trace* trace) const {
  if (input.size() != layers_.front().weights.rows()) {
    throw DimensionError("input has " + std::to_string(input.size()) + " entries, network expects " +
                         std::to_string(layers_.front().weights.rows()));
  }
  ForwardResult result;
  Eigen::VectorXd x = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    Eigen::VectorXd v = x * settings_.v_scale;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (std::abs(v(k)) > settings_.v_read) {
        result.saturated = true;
        v(k) = std::copysign(settings_.v_read, v(k));
      }
    }
    const Eigen::VectorXd v_pos = v.cwiseMax(0.0);
    const Eigen::VectorXd v_neg = (-v).cwiseMax(0.0);
    const Eigen::VectorXd i_pos = read(i, false, v_pos) - read(i, false, v_neg);
    const Eigen::VectorXd i_neg = read(i, true, v_pos) - read(i, true, v_neg);
    if (trace) {
      for (const auto* lobe : {&v_pos, &v_neg}) {
        record_read(*trace, *l.pos_array, *lobe, settings_.t_read);
        record_read(*trace, *l.neg_array, *lobe, settings_.t_read);
      }
    }
    Eigen::VectorXd y = (i_pos - i_neg) / (l.scale * settings_.v_scale);
    for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = activation_apply(l.activation, y(k));
    x = std::move(y);
  }
  result.output = std::move(x);
  return result;
}

ForwardResult forward(const std::vector<LayerMapping>& mappings, const Eigen::VectorXd& input,
                      ReadMode mode, const ReadSettings& settings, Trace* trace) {
  return CrossbarNetwork(mappings, mode, settings).forward(input, trace);
}

Eigen::VectorXd reference_forward(const std::vector<Eigen::MatrixXd>& weights,
                                  const std::vector<Activation>& activations,
                                  const Eigen::VectorXd& input) {
  if (weights.size() != activations.size()) throw DimensionError("one activation per layer");
  Eigen::VectorXd x = input;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].rows() != x.size()) throw DimensionError("reference: width mismatch");
    Eigen::VectorXd z = weights[i].transpose() * x;
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = activation_apply(activations[i], z(k));
    x = std::move(z);
  }
  return x;
}

Eigen::Index argmax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  v.maxCoeff(&best);
  return best;
}

}  // namespace pxbar
