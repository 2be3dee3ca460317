#include "pxbar/energy.hpp"

namespace pxbar {

void Trace::append(const Trace& other) {
  reads.insert(reads.end(), other.reads.begin(), other.reads.end());
  programs.insert(programs.end(), other.programs.begin(), other.programs.end());
}

EnergyReport energy_report(const Trace& trace) {
  EnergyReport report;
  for (const auto& read : trace.reads) {
    const auto rows = read.conductances.rows();
    const auto cols = read.conductances.cols();
    report.mac_count += static_cast<std::uint64_t>(rows * cols);
    double sum = 0.0;
    for (Eigen::Index n = 0; n < rows; ++n) {
      const double v2 = read.voltages(n) * read.voltages(n);
      for (Eigen::Index m = 0; m < cols; ++m) sum += v2 * read.conductances(n, m);
    }
    report.read_energy += sum * read.t_read;
    report.wall_model_time += read.t_read;
  }
  for (const auto& ev : trace.programs) {
    const auto& p = ev.pulse;
    report.program_energy += p.domain == Domain::Electrical
                                 ? p.amplitude * p.amplitude * ev.g_at_pulse * p.duration
                                 : p.amplitude * p.duration;
    report.wall_model_time += p.duration;
  }
  const double total = report.total_energy();
  report.macs_per_second_per_watt = total > 0.0 ? static_cast<double>(report.mac_count) / total : 0.0;
  return report;
}

}  // namespace pxbar
