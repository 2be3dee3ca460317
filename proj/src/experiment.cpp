#include "pxbar/experiment.hpp"

#include "pxbar/csv.hpp"
#include "pxbar/errors.hpp"

#include <cstdio>
#include <fstream>

namespace pxbar {

namespace {

bool skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

}  // namespace

WeightsFixture read_weights_fixture(const std::string& path) {
  const auto lines = csv::read_lines(path);
  std::size_t i = 0;
  while (i < lines.size() && skippable(lines[i])) ++i;
  if (i == lines.size()) throw SchemaError(path + ": missing rows,cols,activation line");
  const auto meta = csv::split(lines[i]);
  if (meta.size() != 3) throw SchemaError(path + ":" + std::to_string(i + 1) + ": expected rows,cols,activation");
  const auto rows = static_cast<Eigen::Index>(csv::parse_double(meta[0]));
  const auto cols = static_cast<Eigen::Index>(csv::parse_double(meta[1]));
  if (rows <= 0 || cols <= 0) throw SchemaError(path + ": rows and cols must be positive");
  WeightsFixture fx{Eigen::MatrixXd(rows, cols), parse_activation(meta[2])};
  Eigen::Index r = 0;
  for (++i; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    if (r >= rows) throw SchemaError(path + ":" + std::to_string(i + 1) + ": more rows than declared");
    const auto fields = csv::split(lines[i]);
    if (static_cast<Eigen::Index>(fields.size()) != cols) {
      throw SchemaError(path + ":" + std::to_string(i + 1) + ": expected " + std::to_string(cols) + " weights");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      try {
        fx.weights(r, c) = csv::parse_double(fields[static_cast<std::size_t>(c)]);
      } catch (const SchemaError& e) {
        throw SchemaError(path + ":" + std::to_string(i + 1) + ": " + e.what());
      }
    }
    ++r;
  }
  if (r != rows) throw SchemaError(path + ": declared " + std::to_string(rows) + " rows, found " + std::to_string(r));
  return fx;
}

void write_weights_fixture(const std::string& path, const WeightsFixture& fixture,
                           const std::string& comment_line) {
  auto out = open_out(path);
  out << "# rows,cols,activation\n";
  if (!comment_line.empty()) out << comment_line << '\n';
  out << fixture.weights.rows() << ',' << fixture.weights.cols() << ',' << to_string(fixture.activation) << '\n';
  for (Eigen::Index r = 0; r < fixture.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < fixture.weights.cols(); ++c) {
      // Round-trip precision so reloaded fixtures reproduce the float oracle.
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", fixture.weights(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

LabelledSamples read_samples(const std::string& path) {
  const auto lines = csv::read_lines(path);
  std::size_t i = 0;
  while (i < lines.size() && skippable(lines[i])) ++i;
  if (i == lines.size()) throw SchemaError(path + ": missing header line");
  const auto header = csv::split(lines[i]);
  LabelledSamples s;
  std::ptrdiff_t label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") label_col = static_cast<std::ptrdiff_t>(c);
    else s.columns.push_back(header[c]);
  }
  std::vector<std::vector<double>> rows;
  for (++i; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    const auto fields = csv::split(lines[i]);
    if (fields.size() != header.size()) {
      throw SchemaError(path + ":" + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) + " fields");
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v;
      try {
        v = csv::parse_double(fields[c]);
      } catch (const SchemaError& e) {
        throw SchemaError(path + ":" + std::to_string(i + 1) + ": " + e.what());
      }
      if (static_cast<std::ptrdiff_t>(c) == label_col) s.labels.push_back(static_cast<int>(v));
      else row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SchemaError(path + ": no samples");
  s.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(s.columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      s.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return s;
}

void write_samples(const std::string& path, const Dataset& data, const std::string& comment_line) {
  auto out = open_out(path);
  if (!comment_line.empty()) out << comment_line << '\n';
  for (Eigen::Index c = 0; c < data.features.cols(); ++c) out << 'x' << c << ',';
  out << "label\n";
  for (Eigen::Index r = 0; r < data.size(); ++r) {
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", data.features(r, c));
      out << buf << ',';
    }
    out << data.labels[static_cast<std::size_t>(r)] << '\n';
  }
}

std::vector<LayerMapping> map_network(const FloatNetwork& net, const DeviceParams& params,
                                      double r_row, double r_col) {
  std::vector<LayerMapping> layers;
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    layers.push_back(map_layer(net.weights[i], net.activations[i], params, {}, nullptr, r_row, r_col));
  }
  return layers;
}

std::vector<int> reference_predictions(const FloatNetwork& net, const Eigen::MatrixXd& features) {
  std::vector<int> out;
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    out.push_back(static_cast<int>(argmax(reference_forward(net.weights, net.activations, features.row(r).transpose()))));
  }
  return out;
}

Evaluation evaluate(const CrossbarNetwork& network, const Eigen::MatrixXd& features) {
  Evaluation ev;
  const auto outputs = network.layers().back().weights.cols();
  ev.outputs.resize(features.rows(), outputs);
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    const auto result = network.forward(features.row(r).transpose(), &ev.trace);
    ev.outputs.row(r) = result.output.transpose();
    ev.saturated = ev.saturated || result.saturated;
    ev.predictions.push_back(static_cast<int>(argmax(result.output)));
  }
  return ev;
}

BlobsRunResult run_blobs_experiment(const DeviceParams& params, const BlobsRunSpec& spec) {
  BlobsRunResult run;
  run.data = make_blobs(spec.seed, spec.blobs);
  run.network = train_classifier(run.data.train, spec.blobs.classes, spec.seed, spec.train);
  const auto& test = run.data.test;
  run.float_accuracy = accuracy(reference_predictions(run.network, test.features), test.labels);

  {
    CrossbarNetwork ideal(map_network(run.network, params), ReadMode::Ideal, spec.read);
    const auto ev = evaluate(ideal, test.features);
    run.ideal_accuracy = accuracy(ev.predictions, test.labels);
    run.ideal_energy = energy_report(ev.trace);
  }

  for (const double tol : spec.tolerances) {
    auto layers = map_network(run.network, params, spec.r_wire, spec.r_wire);
    Trace trace;
    TolerancePoint point;
    point.tol = tol;
    for (auto& layer : layers) {
      point.failed_cells += program_mapping(layer, tol, spec.max_pulses, {}, &trace).failures();
    }
    CrossbarNetwork hw(std::move(layers), ReadMode::Nonideal, spec.read);
    auto ev = evaluate(hw, test.features);
    trace.append(ev.trace);
    point.accuracy = accuracy(ev.predictions, test.labels);
    point.energy = energy_report(trace);
    run.nonideal.push_back(point);
  }
  return run;
}

}  // namespace pxbar
