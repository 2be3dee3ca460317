#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pxbar {

enum class Technology { PCM, RRAM_CB, FTJ };
enum class Domain { Electrical, Optical };
enum class Polarity { Set, Reset };
enum class ResistanceClass { HRS, LRS, Intermediate };

std::string_view to_string(Technology t);
std::string_view to_string(Domain d);
std::string_view to_string(Polarity p);
std::string_view to_string(ResistanceClass c);
Technology parse_technology(std::string_view s);
Domain parse_domain(std::string_view s);

// Nonvolatile state of one junction. `s` is the crystalline fraction (PCM),
// filament completion (CB-RRAM) or switched polarization fraction (FTJ).
struct CellState {
  Technology technology = Technology::PCM;
  double s = 0.0;
  std::uint64_t cycle_count = 0;
  bool stuck = false;

  friend bool operator==(const CellState&, const CellState&) = default;
};

// One programming or read stimulus. Amplitude is volts for electrical pulses
// and watts for optical ones.
struct Pulse {
  Domain domain = Domain::Electrical;
  Polarity polarity = Polarity::Set;
  double amplitude = 0.0;
  double duration = 0.0;  // s

  void validate() const;
};

struct DeviceParams {
  Technology technology = Technology::PCM;
  // Electrical thresholds (V).
  double v_set = 0.0;
  double v_reset = 0.0;
  // Optical thresholds (W); same semantics as the electrical pair.
  double p_set = 0.0;
  double p_reset = 0.0;
  double tau_set = 0.0;  // s, duration of a full 0 -> 1 set
  double g_a = 0.0;      // S at s = 0
  double g_c = 0.0;      // S at s = 1
  bool analog = true;
  std::uint64_t n_endurance = 1'000'000'000'000'000ULL;
  double drift_nu = 0.0;
  // Resistance-class boundaries on s.
  double hrs_max_s = 0.05;
  double lrs_min_s = 0.95;

  void validate() const;
  double set_threshold(Domain d) const { return d == Domain::Electrical ? v_set : p_set; }
  double reset_threshold(Domain d) const { return d == Domain::Electrical ? v_reset : p_reset; }
  bool drift_enabled() const { return drift_nu > 0.0; }
};

// Pure state transition. Sub-threshold pulses and pulses on stuck cells are
// no-ops; a pulse that changes s counts as one cycle.
CellState apply_pulse(const CellState& state, const Pulse& pulse, const DeviceParams& params);

// ln G = (1 - s) ln g_a + s ln g_c, optionally times (t / 1 s)^(-nu (1 - s)).
double conductance(const CellState& state, const DeviceParams& params,
                   std::optional<double> t_since_reset = std::nullopt);

// Inverse of the drift-free log mixing; clamps to [0, 1].
double state_for_conductance(double g, const DeviceParams& params);

ResistanceClass resistance_class(const CellState& state, const DeviceParams& params);

}  // namespace pxbar
