#pragma once

#include "pxbar/device.hpp"
#include "pxbar/energy.hpp"
#include "pxbar/errors.hpp"
#include "pxbar/materials.hpp"
#include "pxbar/optics.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pxbar {

// R x C grid of junction cells sharing one device parameter set, one
// waveguide cell geometry and one switching material. Rows are voltage
// driven; columns are sensed at virtual ground.
class CrossbarArray {
 public:
  // `material` may be null for purely electrical use; optical reads then throw.
  CrossbarArray(std::size_t rows, std::size_t cols, DeviceParams params,
                WaveguideCellGeometry geom = {},
                std::shared_ptr<const MaterialRecord> material = nullptr, double r_row = 0.0,
                double r_col = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const DeviceParams& params() const { return params_; }
  const WaveguideCellGeometry& geometry() const { return geom_; }
  const MaterialRecord& material() const;
  bool has_material() const { return material_ != nullptr; }
  double r_row() const { return r_row_; }
  double r_col() const { return r_col_; }
  void set_wire_resistance(double r_row, double r_col);

  const CellState& cell(std::size_t n, std::size_t m) const;
  void set_cell(std::size_t n, std::size_t m, const CellState& state);
  // Writes the state whose drift-free conductance is `g` (clamped to the
  // device range) without going through pulses.
  void set_conductance(std::size_t n, std::size_t m, double g);
  void set_conductances(const Eigen::MatrixXd& g);

  // Returns true if the pulse changed the cell.
  bool apply_pulse(std::size_t n, std::size_t m, const Pulse& pulse);

  const std::vector<CellState>& cells() const { return cells_; }

 private:
  void check_index(std::size_t n, std::size_t m) const;

  std::size_t rows_;
  std::size_t cols_;
  std::vector<CellState> cells_;  // row-major
  DeviceParams params_;
  WaveguideCellGeometry geom_;
  std::shared_ptr<const MaterialRecord> material_;
  double r_row_;
  double r_col_;
};

Eigen::MatrixXd conductance_matrix(const CrossbarArray& array);

// I_m = sum_n G_nm V_n.
Eigen::VectorXd vmm_ideal(const CrossbarArray& array, const Eigen::VectorXd& voltages);

// Nodal analysis of the full resistive network with wire resistance r_row per
// row segment (starting at the driver) and r_col per column segment (ending at
// the grounded sense node). Factorizes once; solve() can be called for many
// input vectors against the frozen array.
class NodalSolver {
 public:
  explicit NodalSolver(const CrossbarArray& array);
  Eigen::VectorXd solve(const Eigen::VectorXd& voltages) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Eigen::MatrixXd g_;
  double g_row_;  // wire conductance per segment, 0 when the wire is ideal
  double g_col_;
  bool row_unknown_;
  bool col_unknown_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

Eigen::VectorXd vmm_nonideal(const CrossbarArray& array, const Eigen::VectorXd& voltages);

// Appends a ReadEvent for one array read to `trace`.
void record_read(Trace& trace, const CrossbarArray& array, const Eigen::VectorXd& voltages,
                 double t_read);

// End-of-row power after the light crosses every cell of row n.
double optical_read_row(const CrossbarArray& array, std::size_t n, double p_in);

// --- programming -----------------------------------------------------------

struct ProgramOptions {
  Domain domain = Domain::Electrical;
  // Unset amplitudes default to the device thresholds for `domain`.
  std::optional<double> write_amplitude;
  std::optional<double> reset_amplitude;
  // Defaults to tau_set / 1024.
  std::optional<double> reset_duration;
  // Set-pulse schedule as fractions of tau_set.
  double initial_duration_fraction = 1.0 / 16.0;
  double floor_duration_fraction = 1.0 / 16384.0;
};

struct PulseLogEntry {
  Pulse pulse;
  double g_before = 0.0;
  double g_after = 0.0;
};

struct ProgramResult {
  std::vector<PulseLogEntry> log;
  CellState final_state;
  double final_conductance = 0.0;
};

class MaxPulsesExceeded : public Error {
 public:
  MaxPulsesExceeded(const std::string& what, ProgramResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const ProgramResult& partial() const { return partial_; }

 private:
  ProgramResult partial_;
};

// Closed-loop program-and-verify. The controller only sees read-back
// conductances and its own pulse log.
ProgramResult program_cell(CrossbarArray& array, std::size_t n, std::size_t m, double target_g,
                           double tol, std::size_t max_pulses, const ProgramOptions& options = {},
                           Trace* trace = nullptr);

struct CellProgramOutcome {
  std::size_t row = 0;
  std::size_t col = 0;
  double target = 0.0;
  double final_conductance = 0.0;
  bool success = false;
  std::size_t pulses = 0;
  std::string error;
};

struct ProgramReport {
  std::vector<CellProgramOutcome> cells;
  std::size_t total_pulses = 0;
  double total_energy = 0.0;  // J
  std::size_t failures() const;
};

// Programs every cell; per-cell errors are recorded, never thrown.
ProgramReport program_array(CrossbarArray& array, const Eigen::MatrixXd& target, double tol,
                            std::size_t max_pulses, const ProgramOptions& options = {},
                            Trace* trace = nullptr);

// --- dual readout ----------------------------------------------------------

struct CellSnapshot {
  std::size_t row = 0;
  std::size_t col = 0;
  double s = 0.0;
  double conductance = 0.0;
  ResistanceClass resistance_class = ResistanceClass::HRS;
  double transmission = 0.0;
  double phase_rad = 0.0;
};

std::vector<CellSnapshot> electro_optic_snapshot(const CrossbarArray& array);

// --- 3D stacking -----------------------------------------------------------

struct StackedLayer {
  std::shared_ptr<const CrossbarArray> array;
  // Angle to the layer below; unset for the bottom layer.
  std::optional<double> crossing_angle_deg;
  // Crossings between this layer's row stripes and the column stripes of the
  // layer below; 0 for the bottom layer.
  std::size_t crossings_with_below = 0;
};

struct LayerStack {
  std::vector<StackedLayer> layers;
  std::size_t total_interlayer_crossings() const;
};

// Counts crossings of two co-centred families of parallel stripe segments
// on a unit pitch: `lower_lines` stripes of length `lower_length`, and
// `upper_lines` stripes of length `upper_length` rotated by `angle_deg`.
std::size_t count_stripe_crossings(std::size_t lower_lines, double lower_length,
                                   std::size_t upper_lines, double upper_length, double angle_deg);

// `angles_deg` holds one angle per adjacent pair (arrays.size() - 1 entries),
// each in the open interval (0, 180).
LayerStack stack_layers(std::vector<std::shared_ptr<const CrossbarArray>> arrays,
                        const std::vector<double>& angles_deg);

}  // namespace pxbar
