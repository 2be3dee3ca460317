// pxbar command-line driver. Every command writes CSV files into the output
// directory; see README.md for the schemas and exit codes.

#include "pxbar/ann.hpp"
#include "pxbar/config.hpp"
#include "pxbar/crossbar.hpp"
#include "pxbar/csv.hpp"
#include "pxbar/energy.hpp"
#include "pxbar/errors.hpp"
#include "pxbar/experiment.hpp"
#include "pxbar/optics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace pxbar;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kSchema = 3, kModel = 4 };

struct Common {
  std::string config = "configs/default.json";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> sets;
};

struct Context {
  ExperimentConfig cfg;
  std::string stamp;  // "# config_hash=...,seed=..."
  fs::path out_dir;
};

Context load(const Common& common) {
  auto overrides = common.sets;
  if (common.seed) overrides.push_back("seed=" + std::to_string(*common.seed));
  Context ctx{load_config(common.config, overrides), {}, {}};
  ctx.stamp = "# config_hash=" + ctx.cfg.hash() + ",seed=" + std::to_string(ctx.cfg.seed);
  // Relative output directories are taken from the working directory.
  ctx.out_dir = common.out ? fs::path(*common.out) : ctx.cfg.output_dir;
  fs::create_directories(ctx.out_dir);
  return ctx;
}

class CsvWriter {
 public:
  CsvWriter(const Context& ctx, const std::string& name, const std::string& header)
      : path_(ctx.out_dir / name) {
    body_ << ctx.stamp << '\n' << header << '\n';
  }
  CsvWriter& cell(const std::string& s) {
    body_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  CsvWriter& cell(double v) { return cell(csv::fmt(v)); }
  CsvWriter& cell(std::size_t v) { return cell(std::to_string(v)); }
  void end_row() {
    body_ << '\n';
    first_ = true;
  }
  void save() const {
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw Error("cannot write '" + path_.string() + "'");
    out << body_.str();
    std::cout << path_.string() << '\n';
  }

 private:
  fs::path path_;
  std::ostringstream body_;
  bool first_ = true;
};

// "a:b:n" is an n-point linspace (n >= 3); anything else is an explicit
// comma-separated list.
std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw SchemaError("grid '" + spec + "' is not start:stop:count");
    const double a = csv::parse_double(parts[0]), b = csv::parse_double(parts[1]);
    const double n = csv::parse_double(parts[2]);
    if (n < 3 || n != std::floor(n)) throw SchemaError("grid '" + spec + "' needs an integer count >= 3");
    std::vector<double> out;
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * i / (count - 1));
    out.back() = b;
    return out;
  }
  std::vector<double> out;
  for (const auto& f : csv::split(spec)) out.push_back(csv::parse_double(f));
  if (out.empty()) throw SchemaError("empty grid");
  return out;
}

// Snapshot CSVs (row,col,s,conductance_S,...) are accepted wherever a matrix
// of states or conductances is.
bool is_snapshot(const std::string& path) {
  for (const auto& line : csv::read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = csv::split(line);
    return f.size() >= 2 && f[0] == "row" && f[1] == "col";
  }
  return false;
}

Eigen::MatrixXd read_snapshot_column(const std::string& path, const std::string& column,
                                     std::size_t rows, std::size_t cols) {
  const auto lines = csv::read_lines(path);
  std::vector<std::string> header;
  std::size_t which = 0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(rows, cols, std::nan(""));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const auto f = csv::split(lines[i]);
    const auto where = path + ":" + std::to_string(i + 1) + ": ";
    if (header.empty()) {
      header = f;
      const auto it = std::find(header.begin(), header.end(), column);
      if (it == header.end()) throw SchemaError(where + "snapshot lacks column '" + column + "'");
      which = static_cast<std::size_t>(it - header.begin());
      continue;
    }
    if (f.size() != header.size()) throw SchemaError(where + "wrong field count");
    const double r = csv::parse_double(f[0]), c = csv::parse_double(f[1]);
    if (r < 0 || c < 0 || r >= rows || c >= cols) throw DimensionError(where + "cell outside the array");
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = csv::parse_double(f[which]);
  }
  if (m.hasNaN()) throw SchemaError(path + ": snapshot does not cover every cell");
  return m;
}

Eigen::MatrixXd read_cell_matrix(const std::string& path, const std::string& snapshot_column,
                                 const CrossbarArray& array) {
  if (is_snapshot(path)) return read_snapshot_column(path, snapshot_column, array.rows(), array.cols());
  const auto m = csv::read_matrix(path);
  if (static_cast<std::size_t>(m.rows()) != array.rows() ||
      static_cast<std::size_t>(m.cols()) != array.cols()) {
    throw DimensionError(path + ": expected a " + std::to_string(array.rows()) + "x" +
                         std::to_string(array.cols()) + " matrix");
  }
  return m;
}

struct ArrayInputs {
  std::string state;
  std::string conductances;
};

// Array from the config, with cell states or conductances optionally loaded
// from a file. Loading a conductance matrix resizes the array to match.
CrossbarArray build_array(const Context& ctx, const ArrayInputs& in) {
  auto cfg = ctx.cfg;
  if (!in.state.empty() && !in.conductances.empty()) {
    throw ConfigError("--state and --conductances are mutually exclusive");
  }
  if (!in.conductances.empty() && !is_snapshot(in.conductances)) {
    const auto g = csv::read_matrix(in.conductances);
    cfg.array.rows = static_cast<std::size_t>(g.rows());
    cfg.array.cols = static_cast<std::size_t>(g.cols());
  }
  auto array = cfg.make_array();
  if (!in.state.empty()) {
    const auto s = read_cell_matrix(in.state, "s", array);
    for (std::size_t n = 0; n < array.rows(); ++n)
      for (std::size_t m = 0; m < array.cols(); ++m) {
        auto c = array.cell(n, m);
        c.s = s(n, m);
        array.set_cell(n, m, c);
      }
  }
  if (!in.conductances.empty()) {
    const auto g = read_cell_matrix(in.conductances, "conductance_S", array);
    const auto& p = array.params();
    if ((g.array() < p.g_a * (1 - 1e-9)).any() || (g.array() > p.g_c * (1 + 1e-9)).any()) {
      throw DomainError(in.conductances + ": conductance outside [g_a, g_c]");
    }
    array.set_conductances(g);
  }
  return array;
}

void print_energy(const EnergyReport& r) {
  std::printf("energy report\n");
  std::printf("  mac_count                 %llu\n", static_cast<unsigned long long>(r.mac_count));
  std::printf("  read_energy_J             %s\n", csv::fmt(r.read_energy).c_str());
  std::printf("  program_energy_J          %s\n", csv::fmt(r.program_energy).c_str());
  std::printf("  wall_model_time_s         %s\n", csv::fmt(r.wall_model_time).c_str());
  std::printf("  macs_per_second_per_watt  %s\n", csv::fmt(r.macs_per_second_per_watt).c_str());
}

const char* kEnergyHeader =
    "mac_count,read_energy_J,program_energy_J,wall_model_time_s,macs_per_second_per_watt";

void energy_row(CsvWriter& w, const EnergyReport& r) {
  w.cell(std::to_string(r.mac_count))
      .cell(r.read_energy)
      .cell(r.program_energy)
      .cell(r.wall_model_time)
      .cell(r.macs_per_second_per_watt);
}

// --- commands ----------------------------------------------------------------

void cmd_materials(const Common& common, double wavelength, const std::string& grid) {
  const auto ctx = load(common);
  if (!ctx.cfg.material) throw ConfigError("config has no material block");
  const auto& mat = *ctx.cfg.material;
  const double wl = wavelength > 0 ? wavelength : ctx.cfg.geometry.wavelength_nm;
  const auto a = lookup_nk(mat, Phase::Amorphous, wl);
  const auto c = lookup_nk(mat, Phase::Crystalline, wl);
  CsvWriter w(ctx, "materials.csv", "x,wavelength_nm,n,k,eps_re,eps_im");
  for (double x : parse_grid(grid)) {
    const auto idx = mixed_index(x, a, c);
    const auto eps = idx * idx;
    w.cell(x).cell(wl).cell(idx.real()).cell(idx.imag()).cell(eps.real()).cell(eps.imag());
    w.end_row();
  }
  w.save();
}

void cmd_optics_sweep(const Common& common, const std::string& x_grid, const std::string& dn_grid) {
  const auto ctx = load(common);
  const auto& g = ctx.cfg.geometry;
  g.validate();
  const double k0 = 2 * std::numbers::pi / (g.wavelength_nm * 1e-9);
  if (!dn_grid.empty()) {
    CsvWriter w(ctx, "optics_sweep.csv", "delta_n,alpha_per_m,l_prop_m,n_mode,transmission,phase_rad");
    for (double dn : parse_grid(dn_grid)) {
      const double alpha = metal_loss(g, dn);
      const double n_mode = g.n_mode0 + std::abs(dn);
      w.cell(dn).cell(alpha).cell(propagation_length(alpha)).cell(n_mode);
      w.cell(std::exp(-alpha * g.length_m)).cell(wrap_phase(k0 * n_mode * g.length_m));
      w.end_row();
    }
    w.save();
    return;
  }
  if (!ctx.cfg.material) throw ConfigError("an x sweep needs a material block");
  const auto& mat = *ctx.cfg.material;
  CsvWriter w(ctx, "optics_sweep.csv", "x,delta_n,alpha_per_m,l_prop_m,n_mode,transmission,phase_rad");
  for (double x : parse_grid(x_grid)) {
    const double alpha = loss_coefficient(g, mat, x);
    const auto t = cell_transmission(g, mat, x);
    w.cell(x).cell(imbalance(g, mat, x)).cell(alpha).cell(propagation_length(alpha));
    w.cell(g.n_mode0 + mode_index_shift(g, mat, x)).cell(t.transmission).cell(t.phase_rad);
    w.end_row();
  }
  w.save();
}

void cmd_memory_demo(const Common& common) {
  const auto ctx = load(common);
  if (!ctx.cfg.material) throw ConfigError("memory-demo needs a material block");
  const auto& demo = ctx.cfg.memory_demo;
  const auto& p = ctx.cfg.device;
  CrossbarArray cell(1, 1, p, ctx.cfg.geometry, ctx.cfg.material);
  const double duration =
      demo.write_duration_s > 0 ? demo.write_duration_s : p.tau_set / std::max(demo.writes, 1);

  CsvWriter w(ctx, "memory_demo.csv", "pulse,s,conductance_S,class,transmission");
  std::size_t pulse = 0;
  const auto row = [&] {
    const auto snap = electro_optic_snapshot(cell).front();
    w.cell(pulse).cell(snap.s).cell(snap.conductance);
    w.cell(std::string(to_string(snap.resistance_class))).cell(snap.transmission);
    w.end_row();
  };
  row();
  for (int i = 0; i < demo.writes; ++i) {
    cell.apply_pulse(0, 0, {demo.domain, Polarity::Set, p.set_threshold(demo.domain), duration});
    ++pulse;
    row();
  }
  if (demo.erase) {
    cell.apply_pulse(0, 0, {demo.domain, Polarity::Reset, p.reset_threshold(demo.domain), p.tau_set / 1024});
    ++pulse;
    row();
  }
  w.save();
}

void cmd_vmm(const Common& common, const ArrayInputs& in, const std::string& voltages,
             const std::string& mode) {
  const auto ctx = load(common);
  const auto array = build_array(ctx, in);
  const auto v = csv::read_vector(voltages);
  if (static_cast<std::size_t>(v.size()) != array.rows()) {
    throw DimensionError(voltages + ": " + std::to_string(v.size()) + " voltages for " +
                         std::to_string(array.rows()) + " rows");
  }
  const auto i = parse_read_mode(mode) == ReadMode::Ideal ? vmm_ideal(array, v) : vmm_nonideal(array, v);
  CsvWriter w(ctx, "vmm.csv", "column,current_A");
  for (Eigen::Index m = 0; m < i.size(); ++m) {
    w.cell(static_cast<std::size_t>(m)).cell(i(m));
    w.end_row();
  }
  w.save();
}

void write_snapshot(const Context& ctx, const CrossbarArray& array, const std::string& name) {
  const bool optical = array.has_material();
  CsvWriter w(ctx, name, "row,col,s,conductance_S,class,transmission,phase_rad");
  if (optical) {
    for (const auto& c : electro_optic_snapshot(array)) {
      w.cell(c.row).cell(c.col).cell(c.s).cell(c.conductance);
      w.cell(std::string(to_string(c.resistance_class))).cell(c.transmission).cell(c.phase_rad);
      w.end_row();
    }
  } else {
    // No material: the optical columns are left empty.
    for (std::size_t n = 0; n < array.rows(); ++n)
      for (std::size_t m = 0; m < array.cols(); ++m) {
        const auto& c = array.cell(n, m);
        w.cell(n).cell(m).cell(c.s).cell(conductance(c, array.params()));
        w.cell(std::string(to_string(resistance_class(c, array.params())))).cell("").cell("");
        w.end_row();
      }
  }
  w.save();
}

void cmd_program(const Common& common, const ArrayInputs& in, const std::string& target,
                 const std::string& snapshot_out) {
  const auto ctx = load(common);
  auto array = build_array(ctx, in);
  const auto t = read_cell_matrix(target, "conductance_S", array);
  const auto& prog = ctx.cfg.programming;
  Trace trace;
  const auto report = program_array(array, t, prog.tol, prog.max_pulses, prog.options, &trace);
  CsvWriter w(ctx, "program.csv", "row,col,target_S,final_S,success,pulses,error");
  for (const auto& c : report.cells) {
    w.cell(c.row).cell(c.col).cell(c.target).cell(c.final_conductance);
    auto error = c.error;
    std::replace(error.begin(), error.end(), ',', ';');
    w.cell(std::string(c.success ? "1" : "0")).cell(c.pulses).cell(error);
    w.end_row();
  }
  w.save();
  std::fprintf(stderr, "programmed %zu cells, %zu failed, %zu pulses, %s J\n", report.cells.size(),
               report.failures(), report.total_pulses, csv::fmt(report.total_energy).c_str());
  if (!snapshot_out.empty()) write_snapshot(ctx, array, snapshot_out);
}

void cmd_snapshot(const Common& common, const ArrayInputs& in) {
  const auto ctx = load(common);
  write_snapshot(ctx, build_array(ctx, in), "snapshot.csv");
}

void cmd_ann_infer(const Common& common, const std::vector<std::string>& weight_files,
                   const std::string& input, const std::string& mode,
                   std::optional<double> program_tol) {
  const auto ctx = load(common);
  const auto& cfg = ctx.cfg;
  std::vector<LayerMapping> layers;
  for (std::size_t l = 0; l < weight_files.size(); ++l) {
    const auto fx = read_weights_fixture(weight_files[l]);
    if (!layers.empty() && layers.back().weights.cols() != fx.weights.rows()) {
      throw DimensionError(weight_files[l] + ": layer expects " + std::to_string(fx.weights.rows()) +
                           " inputs, previous layer has " + std::to_string(layers.back().weights.cols()) +
                           " outputs");
    }
    layers.push_back(map_layer(fx.weights, fx.activation, cfg.device, cfg.geometry, cfg.material,
                               cfg.array.r_row_ohm, cfg.array.r_col_ohm));
  }

  Trace trace;
  std::size_t failed = 0;
  if (program_tol) {
    for (auto& layer : layers) {
      failed += program_mapping(layer, *program_tol, cfg.programming.max_pulses,
                                cfg.programming.options, &trace)
                    .failures();
    }
  }

  const auto samples = read_samples(input);
  if (samples.features.cols() != layers.front().weights.rows()) {
    throw DimensionError(input + ": " + std::to_string(samples.features.cols()) +
                         " features, first layer expects " + std::to_string(layers.front().weights.rows()));
  }
  const CrossbarNetwork net(std::move(layers), parse_read_mode(mode), cfg.read);
  auto eval = evaluate(net, samples.features);
  trace.append(eval.trace);

  const bool labelled = !samples.labels.empty();
  std::string header = "sample,prediction";
  if (labelled) header += ",label";
  for (Eigen::Index k = 0; k < eval.outputs.cols(); ++k) header += ",y" + std::to_string(k);
  CsvWriter w(ctx, "predictions.csv", header);
  for (std::size_t i = 0; i < eval.predictions.size(); ++i) {
    w.cell(i).cell(std::to_string(eval.predictions[i]));
    if (labelled) w.cell(std::to_string(samples.labels[i]));
    for (Eigen::Index k = 0; k < eval.outputs.cols(); ++k) w.cell(eval.outputs(static_cast<Eigen::Index>(i), k));
    w.end_row();
  }
  w.save();

  const auto energy = energy_report(trace);
  CsvWriter e(ctx, "energy.csv", kEnergyHeader);
  energy_row(e, energy);
  e.end_row();
  e.save();

  print_energy(energy);
  if (labelled) std::printf("accuracy %s\n", csv::fmt(accuracy(eval.predictions, samples.labels)).c_str());
  if (failed) std::fprintf(stderr, "warning: %zu cells missed their programming target\n", failed);
  if (eval.saturated) std::fprintf(stderr, "warning: inputs exceeded v_read and were clipped\n");
}

void cmd_report(const Common& common, double r_wire, const std::string& tolerances) {
  const auto ctx = load(common);
  BlobsRunSpec spec;
  spec.seed = ctx.cfg.seed;
  spec.r_wire = r_wire;
  spec.tolerances = parse_grid(tolerances);
  spec.max_pulses = ctx.cfg.programming.max_pulses;
  spec.read = ctx.cfg.read;
  const auto run = run_blobs_experiment(ctx.cfg.device, spec);

  const auto dir = ctx.out_dir.string();
  write_samples(dir + "/blobs_train.csv", run.data.train, ctx.stamp);
  write_samples(dir + "/blobs_test.csv", run.data.test, ctx.stamp);
  for (std::size_t l = 0; l < run.network.weights.size(); ++l) {
    write_weights_fixture(dir + "/layer" + std::to_string(l) + ".csv",
                          {run.network.weights[l], run.network.activations[l]}, ctx.stamp);
  }

  CsvWriter w(ctx, "report.csv",
              std::string("mode,tol,r_wire_ohm,accuracy,failed_cells,") + kEnergyHeader);
  w.cell("float").cell("").cell("").cell(run.float_accuracy).cell("").cell("").cell("").cell("").cell("").cell("");
  w.end_row();
  w.cell("ideal").cell("").cell(0.0).cell(run.ideal_accuracy).cell(std::size_t{0});
  energy_row(w, run.ideal_energy);
  w.end_row();
  for (const auto& pt : run.nonideal) {
    w.cell("nonideal").cell(pt.tol).cell(r_wire).cell(pt.accuracy).cell(pt.failed_cells);
    energy_row(w, pt.energy);
    w.end_row();
  }
  w.save();
  std::printf("float accuracy    %s\n", csv::fmt(run.float_accuracy).c_str());
  std::printf("ideal accuracy    %s\n", csv::fmt(run.ideal_accuracy).c_str());
  for (const auto& pt : run.nonideal) {
    std::printf("nonideal tol=%s accuracy %s\n", csv::fmt(pt.tol).c_str(), csv::fmt(pt.accuracy).c_str());
  }
}

void add_common(CLI::App* app, Common& common) {
  app->add_option("--config", common.config, "experiment config (JSON)");
  app->add_option("--seed", common.seed, "override the config seed");
  app->add_option("--out", common.out, "output directory");
  app->add_option("--set", common.sets, "override a config key, e.g. --set array.rows=8")
      ->allow_extra_args(false);
}

void add_array_inputs(CLI::App* app, ArrayInputs& in) {
  app->add_option("--state", in.state, "matrix of cell states s, or a snapshot CSV");
  app->add_option("--conductances", in.conductances, "matrix of conductances in S, or a snapshot CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plasmonic memristive crossbar simulator"};
  app.require_subcommand(1);
  Common common;

  auto* materials = app.add_subcommand("materials", "mixed complex index over a fill grid");
  add_common(materials, common);
  double wavelength = 0.0;
  std::string mat_grid = "0:1:11";
  materials->add_option("--wavelength", wavelength, "nm; defaults to the geometry wavelength");
  materials->add_option("--grid", mat_grid, "crystalline fractions, list or start:stop:count");

  auto* optics = app.add_subcommand("optics-sweep", "loss, propagation length, transmission and phase");
  add_common(optics, common);
  std::string x_grid = "0:1:101", dn_grid;
  optics->add_option("--x-grid", x_grid, "crystalline fractions, list or start:stop:count");
  optics->add_option("--dn-grid", dn_grid, "signed index imbalances; replaces the x sweep");

  auto* memory = app.add_subcommand("memory-demo", "write-then-erase series on one cell");
  add_common(memory, common);

  auto* xbar = app.add_subcommand("xbar", "crossbar operations");
  xbar->require_subcommand(1);
  ArrayInputs inputs;
  std::string voltages, mode = "ideal", target, program_snapshot;
  auto* vmm = xbar->add_subcommand("vmm", "column currents for a voltage vector");
  add_common(vmm, common);
  add_array_inputs(vmm, inputs);
  vmm->add_option("--voltages", voltages, "row voltages, one per row")->required();
  vmm->add_option("--mode", mode, "ideal|nonideal");
  auto* program = xbar->add_subcommand("program", "program-and-verify every cell to a target");
  add_common(program, common);
  add_array_inputs(program, inputs);
  program->add_option("--target", target, "target conductances in S, or a snapshot CSV")->required();
  program->add_option("--snapshot-out", program_snapshot, "also write the programmed array snapshot");
  auto* snapshot = xbar->add_subcommand("snapshot", "electrical and optical state of every cell");
  add_common(snapshot, common);
  add_array_inputs(snapshot, inputs);

  auto* infer = app.add_subcommand("ann-infer", "run a mapped network over labelled samples");
  add_common(infer, common);
  std::vector<std::string> weights;
  std::string input;
  std::optional<double> program_tol;
  infer->add_option("--weights", weights, "weight fixture per layer, in order")->required();
  infer->add_option("--input", input, "samples CSV with header, optional label column")->required();
  infer->add_option("--mode", mode, "ideal|nonideal");
  infer->add_option("--program-tol", program_tol, "program arrays with this tolerance first");

  auto* report = app.add_subcommand("report", "blobs train/evaluate sweep");
  add_common(report, common);
  double r_wire = 1.0;
  std::string tolerances = "0.001,0.01,0.1";
  report->add_option("--r-wire", r_wire, "wire resistance per segment, ohm");
  report->add_option("--tolerances", tolerances, "programming tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*materials) cmd_materials(common, wavelength, mat_grid);
    else if (*optics) cmd_optics_sweep(common, x_grid, dn_grid);
    else if (*memory) cmd_memory_demo(common);
    else if (*vmm) cmd_vmm(common, inputs, voltages, mode);
    else if (*program) cmd_program(common, inputs, target, program_snapshot);
    else if (*snapshot) cmd_snapshot(common, inputs);
    else if (*infer) cmd_ann_infer(common, weights, input, mode, program_tol);
    else if (*report) cmd_report(common, r_wire, tolerances);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kSchema;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kSchema;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kModel;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kOk;
}
