#pragma once

#include "pxbar/device.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace pxbar {

// One array read: row voltages applied to a conductance matrix for t_read.
struct ReadEvent {
  Eigen::VectorXd voltages;
  Eigen::MatrixXd conductances;
  double t_read = 0.0;
};

// One programming pulse with the cell conductance read just before it.
struct ProgramEvent {
  Pulse pulse;
  double g_at_pulse = 0.0;
};

// Append-only record of everything that costs energy during a run.
struct Trace {
  std::vector<ReadEvent> reads;
  std::vector<ProgramEvent> programs;

  void append(const Trace& other);
  void clear() {
    reads.clear();
    programs.clear();
  }
};

struct EnergyReport {
  std::uint64_t mac_count = 0;
  double read_energy = 0.0;     // J
  double program_energy = 0.0;  // J
  double wall_model_time = 0.0; // s
  // MAC/s/W == MAC/J. Zero when the trace spent no energy.
  double macs_per_second_per_watt = 0.0;

  double total_energy() const { return read_energy + program_energy; }
};

// Read energy is sum V_n^2 G_nm t_read per read; electrical pulses cost
// amplitude^2 * G * duration, optical ones amplitude * duration.
EnergyReport energy_report(const Trace& trace);

}  // namespace pxbar
