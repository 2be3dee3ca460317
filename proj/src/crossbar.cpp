#include "pxbar/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pxbar {

CrossbarArray::CrossbarArray(std::size_t rows, std::size_t cols, DeviceParams params,
                             WaveguideCellGeometry geom,
                             std::shared_ptr<const MaterialRecord> material, double r_row,
                             double r_col)
    : rows_(rows),
      cols_(cols),
      params_(params),
      geom_(geom),
      material_(std::move(material)),
      r_row_(0.0),
      r_col_(0.0) {
  if (rows == 0 || cols == 0) throw DimensionError("crossbar needs at least one row and column");
  params_.validate();
  if (material_) geom_.validate();
  set_wire_resistance(r_row, r_col);
  cells_.assign(rows * cols, CellState{params_.technology, 0.0, 0, false});
}

const MaterialRecord& CrossbarArray::material() const {
  if (!material_) throw ConfigError("crossbar has no switching material attached");
  return *material_;
}

void CrossbarArray::set_wire_resistance(double r_row, double r_col) {
  if (!(r_row >= 0.0) || !(r_col >= 0.0)) throw InvariantError("wire resistance must be >= 0");
  r_row_ = r_row;
  r_col_ = r_col;
}

void CrossbarArray::check_index(std::size_t n, std::size_t m) const {
  if (n >= rows_ || m >= cols_) {
    throw IndexError("cell (" + std::to_string(n) + "," + std::to_string(m) + ") outside " +
                     std::to_string(rows_) + "x" + std::to_string(cols_) + " array");
  }
}

const CellState& CrossbarArray::cell(std::size_t n, std::size_t m) const {
  check_index(n, m);
  return cells_[n * cols_ + m];
}

void CrossbarArray::set_cell(std::size_t n, std::size_t m, const CellState& state) {
  check_index(n, m);
  if (!(state.s >= 0.0 && state.s <= 1.0)) throw InvariantError("cell state s outside [0,1]");
  cells_[n * cols_ + m] = state;
}

void CrossbarArray::set_conductance(std::size_t n, std::size_t m, double g) {
  check_index(n, m);
  cells_[n * cols_ + m].s = state_for_conductance(g, params_);
}

void CrossbarArray::set_conductances(const Eigen::MatrixXd& g) {
  if (static_cast<std::size_t>(g.rows()) != rows_ || static_cast<std::size_t>(g.cols()) != cols_) {
    throw DimensionError("conductance matrix shape does not match the array");
  }
  for (std::size_t n = 0; n < rows_; ++n)
    for (std::size_t m = 0; m < cols_; ++m) set_conductance(n, m, g(n, m));
}

bool CrossbarArray::apply_pulse(std::size_t n, std::size_t m, const Pulse& pulse) {
  check_index(n, m);
  pulse.validate();
  auto& c = cells_[n * cols_ + m];
  const auto next = pxbar::apply_pulse(c, pulse, params_);
  const bool changed = next.s != c.s;
  c = next;
  return changed;
}

Eigen::MatrixXd conductance_matrix(const CrossbarArray& array) {
  Eigen::MatrixXd g(array.rows(), array.cols());
  for (std::size_t n = 0; n < array.rows(); ++n)
    for (std::size_t m = 0; m < array.cols(); ++m)
      g(n, m) = conductance(array.cell(n, m), array.params());
  return g;
}

namespace {

void check_input(const CrossbarArray& array, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != array.rows()) {
    throw DimensionError("input has " + std::to_string(v.size()) + " entries, array has " +
                         std::to_string(array.rows()) + " rows");
  }
}

}  // namespace

Eigen::VectorXd vmm_ideal(const CrossbarArray& array, const Eigen::VectorXd& voltages) {
  check_input(array, voltages);
  return conductance_matrix(array).transpose() * voltages;
}

// Unknowns: row-wire nodes (n, m) when r_row > 0, then column-wire nodes
// (n, m) when r_col > 0, both row-major. An ideal wire pins its nodes to the
// driver voltage (rows) or to ground (columns).
NodalSolver::NodalSolver(const CrossbarArray& array)
    : rows_(array.rows()),
      cols_(array.cols()),
      g_(conductance_matrix(array)),
      g_row_(array.r_row() > 0.0 ? 1.0 / array.r_row() : 0.0),
      g_col_(array.r_col() > 0.0 ? 1.0 / array.r_col() : 0.0),
      row_unknown_(array.r_row() > 0.0),
      col_unknown_(array.r_col() > 0.0) {
  const auto R = static_cast<Eigen::Index>(rows_);
  const auto C = static_cast<Eigen::Index>(cols_);
  const Eigen::Index row_block = row_unknown_ ? R * C : 0;
  const Eigen::Index size = row_block + (col_unknown_ ? R * C : 0);
  if (size == 0) return;

  const auto row_id = [C](Eigen::Index n, Eigen::Index m) { return n * C + m; };
  const auto col_id = [C, row_block](Eigen::Index n, Eigen::Index m) {
    return row_block + n * C + m;
  };

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(size) * 5);
  const auto link = [&entries](Eigen::Index a, Eigen::Index b, double g) {
    entries.emplace_back(a, a, g);
    entries.emplace_back(b, b, g);
    entries.emplace_back(a, b, -g);
    entries.emplace_back(b, a, -g);
  };
  const auto to_fixed = [&entries](Eigen::Index a, double g) { entries.emplace_back(a, a, g); };

  for (Eigen::Index n = 0; n < R; ++n) {
    for (Eigen::Index m = 0; m < C; ++m) {
      if (row_unknown_) {
        // First segment ties to the driver; the far end of the row is open.
        if (m == 0) to_fixed(row_id(n, m), g_row_);
        else link(row_id(n, m - 1), row_id(n, m), g_row_);
      }
      if (col_unknown_) {
        // Last segment ties to the grounded sense node; the top is open.
        if (n > 0) link(col_id(n - 1, m), col_id(n, m), g_col_);
        if (n == R - 1) to_fixed(col_id(n, m), g_col_);
      }
      const double g = g_(n, m);
      if (row_unknown_ && col_unknown_) link(row_id(n, m), col_id(n, m), g);
      else if (row_unknown_) to_fixed(row_id(n, m), g);
      else to_fixed(col_id(n, m), g);
    }
  }

  Eigen::SparseMatrix<double> a(size, size);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  lu_.compute(a);
  if (lu_.info() != Eigen::Success) throw SingularNetwork("nodal matrix factorization failed");
}

Eigen::VectorXd NodalSolver::solve(const Eigen::VectorXd& voltages) const {
  if (static_cast<std::size_t>(voltages.size()) != rows_) {
    throw DimensionError("input has " + std::to_string(voltages.size()) + " entries, array has " +
                         std::to_string(rows_) + " rows");
  }
  const auto R = static_cast<Eigen::Index>(rows_);
  const auto C = static_cast<Eigen::Index>(cols_);
  if (!row_unknown_ && !col_unknown_) return g_.transpose() * voltages;

  const Eigen::Index row_block = row_unknown_ ? R * C : 0;
  const Eigen::Index size = row_block + (col_unknown_ ? R * C : 0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  for (Eigen::Index n = 0; n < R; ++n) {
    if (row_unknown_) rhs(n * C) += g_row_ * voltages(n);
    else
      for (Eigen::Index m = 0; m < C; ++m) rhs(row_block + n * C + m) += g_(n, m) * voltages(n);
  }
  const Eigen::VectorXd x = lu_.solve(rhs);
  if (!x.allFinite()) throw SingularNetwork("nodal solve produced non-finite voltages");

  Eigen::VectorXd current = Eigen::VectorXd::Zero(C);
  for (Eigen::Index n = 0; n < R; ++n) {
    for (Eigen::Index m = 0; m < C; ++m) {
      const double v_row = row_unknown_ ? x(n * C + m) : voltages(n);
      const double v_col = col_unknown_ ? x(row_block + n * C + m) : 0.0;
      current(m) += g_(n, m) * (v_row - v_col);
    }
  }
  return current;
}

Eigen::VectorXd vmm_nonideal(const CrossbarArray& array, const Eigen::VectorXd& voltages) {
  check_input(array, voltages);
  return NodalSolver(array).solve(voltages);
}

void record_read(Trace& trace, const CrossbarArray& array, const Eigen::VectorXd& voltages,
                 double t_read) {
  check_input(array, voltages);
  trace.reads.push_back({voltages, conductance_matrix(array), t_read});
}

double optical_read_row(const CrossbarArray& array, std::size_t n, double p_in) {
  if (n >= array.rows()) throw IndexError("row " + std::to_string(n) + " outside array");
  if (!(p_in >= 0.0)) throw DomainError("input power must be >= 0");
  double p = p_in;
  for (std::size_t m = 0; m < array.cols(); ++m) {
    p *= cell_transmission(array.geometry(), array.material(), array.cell(n, m).s).transmission;
  }
  return p;
}

// --- programming -----------------------------------------------------------

ProgramResult program_cell(CrossbarArray& array, std::size_t n, std::size_t m, double target_g,
                           double tol, std::size_t max_pulses, const ProgramOptions& options,
                           Trace* trace) {
  const auto& params = array.params();
  if (!(target_g >= params.g_a && target_g <= params.g_c)) {
    throw TargetOutOfRange("target " + std::to_string(target_g) + " S outside [g_a, g_c]");
  }
  if (!(tol > 0.0)) throw DomainError("program tolerance must be > 0");
  const auto within = [&](double g) { return std::abs(g - target_g) / target_g <= tol; };
  if (!params.analog && !within(params.g_a) && !within(params.g_c)) {
    throw TargetOutOfRange("binary device can only reach its endpoint conductances");
  }

  const Domain domain = options.domain;
  const double write_amp = options.write_amplitude.value_or(params.set_threshold(domain));
  const double reset_amp = options.reset_amplitude.value_or(params.reset_threshold(domain));
  const double reset_duration = options.reset_duration.value_or(params.tau_set / 1024.0);
  const double floor_duration = params.tau_set * options.floor_duration_fraction;
  double step = params.tau_set * options.initial_duration_fraction;

  ProgramResult result;
  // Set-pulse time accumulated since the last reset, and the largest such
  // accumulation whose read-back was still below target. After a reset the
  // controller replays that amount in one pulse before refining.
  double accumulated = 0.0;
  double last_below = 0.0;
  bool replay = false;

  const auto read = [&] { return conductance(array.cell(n, m), params); };
  const auto fire = [&](const Pulse& p) {
    const double before = read();
    array.apply_pulse(n, m, p);
    result.log.push_back({p, before, read()});
    if (trace) trace->programs.push_back({p, before});
  };

  while (true) {
    const double g = read();
    if (within(g)) break;
    if (result.log.size() >= max_pulses) {
      result.final_state = array.cell(n, m);
      result.final_conductance = g;
      throw MaxPulsesExceeded("cell (" + std::to_string(n) + "," + std::to_string(m) +
                                  ") missed target after " + std::to_string(max_pulses) + " pulses",
                              std::move(result));
    }
    if (g < target_g) {
      last_below = std::max(last_below, accumulated);
      double duration = step;
      if (replay && last_below > 0.0) duration = last_below;
      replay = false;
      fire({domain, Polarity::Set, write_amp, duration});
      accumulated += duration;
    } else {
      step = std::max(step / 2.0, floor_duration);
      fire({domain, Polarity::Reset, reset_amp, reset_duration});
      accumulated = 0.0;
      replay = true;
    }
  }
  result.final_state = array.cell(n, m);
  result.final_conductance = read();
  return result;
}

std::size_t ProgramReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.success; }));
}

ProgramReport program_array(CrossbarArray& array, const Eigen::MatrixXd& target, double tol,
                            std::size_t max_pulses, const ProgramOptions& options, Trace* trace) {
  if (static_cast<std::size_t>(target.rows()) != array.rows() ||
      static_cast<std::size_t>(target.cols()) != array.cols()) {
    throw DimensionError("target matrix shape does not match the array");
  }
  ProgramReport report;
  Trace local;
  for (std::size_t n = 0; n < array.rows(); ++n) {
    for (std::size_t m = 0; m < array.cols(); ++m) {
      CellProgramOutcome outcome;
      outcome.row = n;
      outcome.col = m;
      outcome.target = target(n, m);
      const std::vector<PulseLogEntry>* log = nullptr;
      ProgramResult result;
      try {
        result = program_cell(array, n, m, target(n, m), tol, max_pulses, options, &local);
        outcome.success = true;
        log = &result.log;
      } catch (const MaxPulsesExceeded& e) {
        outcome.error = e.what();
        result = e.partial();
        log = &result.log;
      } catch (const Error& e) {
        outcome.error = e.what();
      }
      outcome.final_conductance = conductance(array.cell(n, m), array.params());
      outcome.pulses = log ? log->size() : 0;
      report.total_pulses += outcome.pulses;
      report.cells.push_back(std::move(outcome));
    }
  }
  Trace only_programs;
  only_programs.programs = local.programs;
  report.total_energy = energy_report(only_programs).program_energy;
  if (trace) trace->append(local);
  return report;
}

std::vector<CellSnapshot> electro_optic_snapshot(const CrossbarArray& array) {
  std::vector<CellSnapshot> out;
  out.reserve(array.rows() * array.cols());
  for (std::size_t n = 0; n < array.rows(); ++n) {
    for (std::size_t m = 0; m < array.cols(); ++m) {
      const auto& c = array.cell(n, m);
      const auto optics = cell_transmission(array.geometry(), array.material(), c.s);
      out.push_back({n, m, c.s, conductance(c, array.params()), resistance_class(c, array.params()),
                     optics.transmission, optics.phase_rad});
    }
  }
  return out;
}

// --- 3D stacking -----------------------------------------------------------

std::size_t LayerStack::total_interlayer_crossings() const {
  std::size_t total = 0;
  for (const auto& l : layers) total += l.crossings_with_below;
  return total;
}

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

bool segments_intersect(const Segment& a, const Segment& b) {
  constexpr double eps = 1e-12;
  const double dax = a.x1 - a.x0, day = a.y1 - a.y0;
  const double dbx = b.x1 - b.x0, dby = b.y1 - b.y0;
  const double denom = cross(dax, day, dbx, dby);
  if (std::abs(denom) < eps) return false;  // parallel stripes never cross
  const double t = cross(b.x0 - a.x0, b.y0 - a.y0, dbx, dby) / denom;
  const double u = cross(b.x0 - a.x0, b.y0 - a.y0, dax, day) / denom;
  return t >= -eps && t <= 1.0 + eps && u >= -eps && u <= 1.0 + eps;
}

std::vector<Segment> stripe_family(std::size_t lines, double length, double angle_rad) {
  const double ux = std::cos(angle_rad), uy = std::sin(angle_rad);
  const double nx = -uy, ny = ux;
  std::vector<Segment> out;
  out.reserve(lines);
  for (std::size_t i = 0; i < lines; ++i) {
    const double offset = static_cast<double>(i) - (static_cast<double>(lines) - 1.0) / 2.0;
    const double cx = offset * nx, cy = offset * ny;
    out.push_back({cx - ux * length / 2, cy - uy * length / 2, cx + ux * length / 2,
                   cy + uy * length / 2});
  }
  return out;
}

}  // namespace

std::size_t count_stripe_crossings(std::size_t lower_lines, double lower_length,
                                   std::size_t upper_lines, double upper_length,
                                   double angle_deg) {
  const auto lower = stripe_family(lower_lines, lower_length, 0.0);
  const auto upper = stripe_family(upper_lines, upper_length, angle_deg * std::numbers::pi / 180.0);
  std::size_t count = 0;
  for (const auto& a : lower)
    for (const auto& b : upper) count += segments_intersect(a, b) ? 1 : 0;
  return count;
}

LayerStack stack_layers(std::vector<std::shared_ptr<const CrossbarArray>> arrays,
                        const std::vector<double>& angles_deg) {
  if (arrays.empty()) throw DimensionError("a layer stack needs at least one array");
  if (angles_deg.size() + 1 != arrays.size()) {
    throw DimensionError("need one crossing angle per adjacent layer pair");
  }
  LayerStack stack;
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    if (!arrays[i]) throw DimensionError("null array in layer stack");
    StackedLayer layer{arrays[i], std::nullopt, 0};
    if (i > 0) {
      const double theta = angles_deg[i - 1];
      if (!(theta > 0.0 && theta < 180.0)) {
        throw AngleOutOfRange("crossing angle must lie in (0, 180) degrees");
      }
      const auto& below = *arrays[i - 1];
      const auto& above = *arrays[i];
      // Column stripes of the lower layer span its rows; row stripes of the
      // upper layer span its columns. Unit pitch.
      layer.crossing_angle_deg = theta;
      layer.crossings_with_below =
          count_stripe_crossings(below.cols(), static_cast<double>(below.rows()), above.rows(),
                                 static_cast<double>(above.cols()), theta);
    }
    stack.layers.push_back(std::move(layer));
  }
  return stack;
}

}  // namespace pxbar
