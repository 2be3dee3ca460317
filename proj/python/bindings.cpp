#include "pxbar/ann.hpp"
#include "pxbar/config.hpp"
#include "pxbar/crossbar.hpp"
#include "pxbar/device.hpp"
#include "pxbar/energy.hpp"
#include "pxbar/errors.hpp"
#include "pxbar/experiment.hpp"
#include "pxbar/materials.hpp"
#include "pxbar/optics.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace pxbar;

namespace {

using MaterialPtr = std::shared_ptr<MaterialRecord>;

std::shared_ptr<const MaterialRecord> as_const(const MaterialPtr& m) { return m; }

MaterialPtr as_mutable(const std::shared_ptr<const MaterialRecord>& m) {
  return std::const_pointer_cast<MaterialRecord>(m);
}

template <class E>
std::string repr_enum(E e) {
  return std::string(to_string(e));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Plasmonic memristive crossbar simulator core";

  // Exceptions. Every library error derives from pxbar.Error.
  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<InvariantError>(m, "InvariantError", error);
  py::register_exception<OutOfRange>(m, "OutOfRange", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<DimensionError>(m, "DimensionError", error);
  py::register_exception<IndexError>(m, "IndexError", error);
  py::register_exception<SingularNetwork>(m, "SingularNetwork", error);
  py::register_exception<TargetOutOfRange>(m, "TargetOutOfRange", error);
  py::register_exception<AngleOutOfRange>(m, "AngleOutOfRange", error);
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<SchemaError>(m, "SchemaError", error);
  py::register_exception<MaxPulsesExceeded>(m, "MaxPulsesExceeded", error);

  // --- materials ---
  py::enum_<Phase>(m, "Phase").value("AMORPHOUS", Phase::Amorphous).value("CRYSTALLINE", Phase::Crystalline);

  py::class_<DispersionRow>(m, "DispersionRow")
      .def_readonly("wavelength_nm", &DispersionRow::wavelength_nm)
      .def_readonly("n_amorphous", &DispersionRow::n_amorphous)
      .def_readonly("k_amorphous", &DispersionRow::k_amorphous)
      .def_readonly("n_crystalline", &DispersionRow::n_crystalline)
      .def_readonly("k_crystalline", &DispersionRow::k_crystalline);

  py::class_<MaterialRecord, MaterialPtr>(m, "MaterialRecord")
      .def_readonly("name", &MaterialRecord::name)
      .def_readonly("table", &MaterialRecord::table)
      .def_readonly("g_amorphous", &MaterialRecord::g_amorphous)
      .def_readonly("g_crystalline", &MaterialRecord::g_crystalline)
      .def("contrast", &MaterialRecord::contrast);

  m.def(
      "load_material",
      [](const std::string& path, double g_a, double g_c) {
        return std::make_shared<MaterialRecord>(load_material(path, g_a, g_c));
      },
      py::arg("path"), py::arg("g_amorphous_S"), py::arg("g_crystalline_S"));
  m.def("lookup_nk", &lookup_nk, py::arg("material"), py::arg("phase"), py::arg("wavelength_nm"));
  m.def("mixed_index", &mixed_index, py::arg("x"), py::arg("n_amorphous"), py::arg("n_crystalline"));

  // --- device ---
  py::enum_<Technology>(m, "Technology")
      .value("PCM", Technology::PCM)
      .value("RRAM_CB", Technology::RRAM_CB)
      .value("FTJ", Technology::FTJ);
  py::enum_<Domain>(m, "Domain").value("ELECTRICAL", Domain::Electrical).value("OPTICAL", Domain::Optical);
  py::enum_<Polarity>(m, "Polarity").value("SET", Polarity::Set).value("RESET", Polarity::Reset);
  py::enum_<ResistanceClass>(m, "ResistanceClass")
      .value("HRS", ResistanceClass::HRS)
      .value("LRS", ResistanceClass::LRS)
      .value("INTERMEDIATE", ResistanceClass::Intermediate);

  py::class_<CellState>(m, "CellState")
      .def(py::init([](Technology t, double s, std::uint64_t cycles, bool stuck) {
             return CellState{t, s, cycles, stuck};
           }),
           py::arg("technology") = Technology::PCM, py::arg("s") = 0.0, py::arg("cycle_count") = 0,
           py::arg("stuck") = false)
      .def_readwrite("technology", &CellState::technology)
      .def_readwrite("s", &CellState::s)
      .def_readwrite("cycle_count", &CellState::cycle_count)
      .def_readwrite("stuck", &CellState::stuck)
      .def(py::self == py::self)
      .def("__repr__", [](const CellState& c) {
        return "CellState(" + repr_enum(c.technology) + ", s=" + std::to_string(c.s) +
               ", cycle_count=" + std::to_string(c.cycle_count) + (c.stuck ? ", stuck)" : ")");
      });

  py::class_<Pulse>(m, "Pulse")
      .def(py::init([](Domain d, Polarity p, double amplitude, double duration) {
             return Pulse{d, p, amplitude, duration};
           }),
           py::arg("domain"), py::arg("polarity"), py::arg("amplitude"), py::arg("duration"))
      .def_readwrite("domain", &Pulse::domain)
      .def_readwrite("polarity", &Pulse::polarity)
      .def_readwrite("amplitude", &Pulse::amplitude)
      .def_readwrite("duration", &Pulse::duration);

  py::class_<DeviceParams>(m, "DeviceParams")
      .def(py::init<>())
      .def_readwrite("technology", &DeviceParams::technology)
      .def_readwrite("v_set", &DeviceParams::v_set)
      .def_readwrite("v_reset", &DeviceParams::v_reset)
      .def_readwrite("p_set", &DeviceParams::p_set)
      .def_readwrite("p_reset", &DeviceParams::p_reset)
      .def_readwrite("tau_set", &DeviceParams::tau_set)
      .def_readwrite("g_a", &DeviceParams::g_a)
      .def_readwrite("g_c", &DeviceParams::g_c)
      .def_readwrite("analog", &DeviceParams::analog)
      .def_readwrite("n_endurance", &DeviceParams::n_endurance)
      .def_readwrite("drift_nu", &DeviceParams::drift_nu)
      .def_readwrite("hrs_max_s", &DeviceParams::hrs_max_s)
      .def_readwrite("lrs_min_s", &DeviceParams::lrs_min_s)
      .def("validate", &DeviceParams::validate);

  m.def("apply_pulse", py::overload_cast<const CellState&, const Pulse&, const DeviceParams&>(&apply_pulse),
        py::arg("state"), py::arg("pulse"), py::arg("params"));
  m.def("conductance", &conductance, py::arg("state"), py::arg("params"), py::arg("t") = std::nullopt);
  m.def("state_for_conductance", &state_for_conductance, py::arg("g"), py::arg("params"));
  m.def("resistance_class", &resistance_class, py::arg("state"), py::arg("params"));
  m.def("load_technology_defaults", &load_technology_defaults, py::arg("path"));

  // --- optics ---
  py::enum_<PcmSide>(m, "PcmSide").value("RIDGE", PcmSide::Ridge).value("BUFFER", PcmSide::Buffer);

  py::class_<WaveguideCellGeometry>(m, "WaveguideCellGeometry")
      .def(py::init<>())
      .def_readwrite("length_m", &WaveguideCellGeometry::length_m)
      .def_readwrite("wavelength_nm", &WaveguideCellGeometry::wavelength_nm)
      .def_readwrite("gamma", &WaveguideCellGeometry::gamma)
      .def_readwrite("fill", &WaveguideCellGeometry::fill)
      .def_readwrite("pcm_side", &WaveguideCellGeometry::pcm_side)
      .def_readwrite("alpha_min", &WaveguideCellGeometry::alpha_min)
      .def_readwrite("c2", &WaveguideCellGeometry::c2)
      .def_readwrite("n_mode0", &WaveguideCellGeometry::n_mode0)
      .def("validate", &WaveguideCellGeometry::validate);

  py::class_<CellOptics>(m, "CellOptics")
      .def_readonly("transmission", &CellOptics::transmission)
      .def_readonly("phase_rad", &CellOptics::phase_rad);

  m.def("imbalance", &imbalance, py::arg("geometry"), py::arg("material"), py::arg("x"));
  m.def("metal_loss", &metal_loss, py::arg("geometry"), py::arg("delta_n"));
  m.def("loss_coefficient", &loss_coefficient, py::arg("geometry"), py::arg("material"), py::arg("x"));
  m.def("propagation_length", &propagation_length, py::arg("alpha_per_m"));
  m.def("cell_transmission", &cell_transmission, py::arg("geometry"), py::arg("material"), py::arg("x"));

  // --- energy ---
  py::class_<Trace>(m, "Trace")
      .def(py::init<>())
      .def_property_readonly("n_reads", [](const Trace& t) { return t.reads.size(); })
      .def_property_readonly("n_programs", [](const Trace& t) { return t.programs.size(); })
      .def(
          "add_read",
          [](Trace& t, const Eigen::VectorXd& v, const Eigen::MatrixXd& g, double t_read) {
            t.reads.push_back({v, g, t_read});
          },
          py::arg("voltages"), py::arg("conductances"), py::arg("t_read"))
      .def("append", &Trace::append)
      .def("clear", &Trace::clear);

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("mac_count", &EnergyReport::mac_count)
      .def_readonly("read_energy", &EnergyReport::read_energy)
      .def_readonly("program_energy", &EnergyReport::program_energy)
      .def_readonly("wall_model_time", &EnergyReport::wall_model_time)
      .def_readonly("macs_per_second_per_watt", &EnergyReport::macs_per_second_per_watt)
      .def("total_energy", &EnergyReport::total_energy);

  m.def("energy_report", &energy_report, py::arg("trace"));

  // --- crossbar ---
  py::class_<CrossbarArray, std::shared_ptr<CrossbarArray>>(m, "CrossbarArray")
      .def(py::init([](std::size_t rows, std::size_t cols, const DeviceParams& params,
                       const WaveguideCellGeometry& geom, const MaterialPtr& material, double r_row,
                       double r_col) {
             return std::make_shared<CrossbarArray>(rows, cols, params, geom, as_const(material), r_row, r_col);
           }),
           py::arg("rows"), py::arg("cols"), py::arg("params"), py::arg("geometry") = WaveguideCellGeometry{},
           py::arg("material") = MaterialPtr{}, py::arg("r_row") = 0.0, py::arg("r_col") = 0.0)
      .def_property_readonly("rows", &CrossbarArray::rows)
      .def_property_readonly("cols", &CrossbarArray::cols)
      .def_property_readonly("params", &CrossbarArray::params)
      .def_property_readonly("r_row", &CrossbarArray::r_row)
      .def_property_readonly("r_col", &CrossbarArray::r_col)
      .def("set_wire_resistance", &CrossbarArray::set_wire_resistance, py::arg("r_row"), py::arg("r_col"))
      .def("cell", &CrossbarArray::cell, py::arg("n"), py::arg("m"))
      .def("set_cell", &CrossbarArray::set_cell, py::arg("n"), py::arg("m"), py::arg("state"))
      .def("set_conductances", &CrossbarArray::set_conductances, py::arg("g"))
      .def("apply_pulse", &CrossbarArray::apply_pulse, py::arg("n"), py::arg("m"), py::arg("pulse"));

  m.def("conductance_matrix", &conductance_matrix, py::arg("array"));
  m.def("vmm_ideal", &vmm_ideal, py::arg("array"), py::arg("voltages"));
  m.def("vmm_nonideal", &vmm_nonideal, py::arg("array"), py::arg("voltages"));
  m.def("optical_read_row", &optical_read_row, py::arg("array"), py::arg("n"), py::arg("p_in"));

  py::class_<ProgramOptions>(m, "ProgramOptions")
      .def(py::init<>())
      .def_readwrite("domain", &ProgramOptions::domain)
      .def_readwrite("write_amplitude", &ProgramOptions::write_amplitude)
      .def_readwrite("reset_amplitude", &ProgramOptions::reset_amplitude)
      .def_readwrite("reset_duration", &ProgramOptions::reset_duration)
      .def_readwrite("initial_duration_fraction", &ProgramOptions::initial_duration_fraction)
      .def_readwrite("floor_duration_fraction", &ProgramOptions::floor_duration_fraction);

  py::class_<PulseLogEntry>(m, "PulseLogEntry")
      .def_readonly("pulse", &PulseLogEntry::pulse)
      .def_readonly("g_before", &PulseLogEntry::g_before)
      .def_readonly("g_after", &PulseLogEntry::g_after);

  py::class_<ProgramResult>(m, "ProgramResult")
      .def_readonly("log", &ProgramResult::log)
      .def_readonly("final_state", &ProgramResult::final_state)
      .def_readonly("final_conductance", &ProgramResult::final_conductance);

  m.def("program_cell", &program_cell, py::arg("array"), py::arg("n"), py::arg("m"), py::arg("target_g"),
        py::arg("tol"), py::arg("max_pulses"), py::arg("options") = ProgramOptions{},
        py::arg("trace") = nullptr);

  py::class_<CellProgramOutcome>(m, "CellProgramOutcome")
      .def_readonly("row", &CellProgramOutcome::row)
      .def_readonly("col", &CellProgramOutcome::col)
      .def_readonly("target", &CellProgramOutcome::target)
      .def_readonly("final_conductance", &CellProgramOutcome::final_conductance)
      .def_readonly("success", &CellProgramOutcome::success)
      .def_readonly("pulses", &CellProgramOutcome::pulses)
      .def_readonly("error", &CellProgramOutcome::error);

  py::class_<ProgramReport>(m, "ProgramReport")
      .def_readonly("cells", &ProgramReport::cells)
      .def_readonly("total_pulses", &ProgramReport::total_pulses)
      .def_readonly("total_energy", &ProgramReport::total_energy)
      .def("failures", &ProgramReport::failures);

  m.def("program_array", &program_array, py::arg("array"), py::arg("target"), py::arg("tol"),
        py::arg("max_pulses"), py::arg("options") = ProgramOptions{}, py::arg("trace") = nullptr);

  py::class_<CellSnapshot>(m, "CellSnapshot")
      .def_readonly("row", &CellSnapshot::row)
      .def_readonly("col", &CellSnapshot::col)
      .def_readonly("s", &CellSnapshot::s)
      .def_readonly("conductance", &CellSnapshot::conductance)
      .def_readonly("resistance_class", &CellSnapshot::resistance_class)
      .def_readonly("transmission", &CellSnapshot::transmission)
      .def_readonly("phase_rad", &CellSnapshot::phase_rad);

  m.def("electro_optic_snapshot", &electro_optic_snapshot, py::arg("array"));

  py::class_<StackedLayer>(m, "StackedLayer")
      .def_readonly("crossing_angle_deg", &StackedLayer::crossing_angle_deg)
      .def_readonly("crossings_with_below", &StackedLayer::crossings_with_below);
  py::class_<LayerStack>(m, "LayerStack")
      .def_readonly("layers", &LayerStack::layers)
      .def("total_interlayer_crossings", &LayerStack::total_interlayer_crossings);
  m.def(
      "stack_layers",
      [](const std::vector<std::shared_ptr<CrossbarArray>>& arrays, const std::vector<double>& angles) {
        return stack_layers({arrays.begin(), arrays.end()}, angles);
      },
      py::arg("arrays"), py::arg("angles_deg"));

  // --- ann ---
  py::enum_<Activation>(m, "Activation")
      .value("NONE", Activation::None)
      .value("RELU", Activation::Relu)
      .value("SIGMOID", Activation::Sigmoid)
      .value("TANH", Activation::Tanh);
  py::enum_<ReadMode>(m, "ReadMode").value("IDEAL", ReadMode::Ideal).value("NONIDEAL", ReadMode::Nonideal);

  m.def("activation_apply", &activation_apply, py::arg("kind"), py::arg("z"));

  py::class_<DifferentialTargets>(m, "DifferentialTargets")
      .def_readonly("g_pos", &DifferentialTargets::g_pos)
      .def_readonly("g_neg", &DifferentialTargets::g_neg)
      .def_readonly("scale", &DifferentialTargets::scale)
      .def_readonly("warning", &DifferentialTargets::warning);

  m.def("weights_to_conductances", &weights_to_conductances, py::arg("weights"), py::arg("params"),
        py::arg("fallback_scale") = 0.0);
  m.def("conductances_to_weights", &conductances_to_weights, py::arg("g_pos"), py::arg("g_neg"),
        py::arg("scale"));

  py::class_<LayerMapping>(m, "LayerMapping")
      .def_readonly("weights", &LayerMapping::weights)
      .def_readonly("scale", &LayerMapping::scale)
      .def_readonly("pos_array", &LayerMapping::pos_array)
      .def_readonly("neg_array", &LayerMapping::neg_array)
      .def_readonly("activation", &LayerMapping::activation);

  m.def(
      "map_layer",
      [](const Eigen::MatrixXd& w, Activation act, const DeviceParams& params,
         const WaveguideCellGeometry& geom, const MaterialPtr& material, double r_row, double r_col) {
        return map_layer(w, act, params, geom, as_const(material), r_row, r_col);
      },
      py::arg("weights"), py::arg("activation"), py::arg("params"),
      py::arg("geometry") = WaveguideCellGeometry{}, py::arg("material") = MaterialPtr{},
      py::arg("r_row") = 0.0, py::arg("r_col") = 0.0);
  m.def("program_mapping", &program_mapping, py::arg("mapping"), py::arg("tol"), py::arg("max_pulses"),
        py::arg("options") = ProgramOptions{}, py::arg("trace") = nullptr);

  py::class_<ReadSettings>(m, "ReadSettings")
      .def(py::init([](double v_read, double v_scale, double t_read) {
             return ReadSettings{v_read, v_scale, t_read};
           }),
           py::arg("v_read") = 0.2, py::arg("v_scale") = 0.1, py::arg("t_read") = 1e-9)
      .def_readwrite("v_read", &ReadSettings::v_read)
      .def_readwrite("v_scale", &ReadSettings::v_scale)
      .def_readwrite("t_read", &ReadSettings::t_read);

  py::class_<ForwardResult>(m, "ForwardResult")
      .def_readonly("output", &ForwardResult::output)
      .def_readonly("saturated", &ForwardResult::saturated);

  py::class_<CrossbarNetwork>(m, "CrossbarNetwork")
      .def(py::init<std::vector<LayerMapping>, ReadMode, ReadSettings>(), py::arg("layers"),
           py::arg("mode"), py::arg("settings") = ReadSettings{})
      .def("forward", &CrossbarNetwork::forward, py::arg("input"), py::arg("trace") = nullptr);

  m.def("forward", &forward, py::arg("mappings"), py::arg("input"), py::arg("mode"),
        py::arg("settings") = ReadSettings{}, py::arg("trace") = nullptr);
  m.def("reference_forward", &reference_forward, py::arg("weights"), py::arg("activations"),
        py::arg("input"));

  // --- config and experiments ---
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_property_readonly("material", [](const ExperimentConfig& c) { return as_mutable(c.material); })
      .def_readonly("device", &ExperimentConfig::device)
      .def_readonly("geometry", &ExperimentConfig::geometry)
      .def_readonly("read", &ExperimentConfig::read)
      .def_readonly("seed", &ExperimentConfig::seed)
      .def_property_readonly("output_dir", [](const ExperimentConfig& c) { return c.output_dir.string(); })
      .def("hash", &ExperimentConfig::hash)
      .def("make_array", [](const ExperimentConfig& c) { return std::make_shared<CrossbarArray>(c.make_array()); });

  m.def("load_config", &load_config, py::arg("path"), py::arg("overrides") = std::vector<std::string>{});

  py::class_<BlobsRunSpec>(m, "BlobsRunSpec")
      .def(py::init<>())
      .def_readwrite("seed", &BlobsRunSpec::seed)
      .def_readwrite("r_wire", &BlobsRunSpec::r_wire)
      .def_readwrite("tolerances", &BlobsRunSpec::tolerances)
      .def_readwrite("max_pulses", &BlobsRunSpec::max_pulses)
      .def_readwrite("read", &BlobsRunSpec::read);

  py::class_<TolerancePoint>(m, "TolerancePoint")
      .def_readonly("tol", &TolerancePoint::tol)
      .def_readonly("accuracy", &TolerancePoint::accuracy)
      .def_readonly("failed_cells", &TolerancePoint::failed_cells)
      .def_readonly("energy", &TolerancePoint::energy);

  py::class_<BlobsRunResult>(m, "BlobsRunResult")
      .def_readonly("float_accuracy", &BlobsRunResult::float_accuracy)
      .def_readonly("ideal_accuracy", &BlobsRunResult::ideal_accuracy)
      .def_readonly("ideal_energy", &BlobsRunResult::ideal_energy)
      .def_readonly("nonideal", &BlobsRunResult::nonideal);

  m.def("run_blobs_experiment", &run_blobs_experiment, py::arg("params"), py::arg("spec") = BlobsRunSpec{});
}
