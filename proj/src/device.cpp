#include "pxbar/device.hpp"

#include "pxbar/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pxbar {

std::string_view to_string(Technology t) {
  switch (t) {
    case Technology::PCM: return "PCM";
    case Technology::RRAM_CB: return "RRAM_CB";
    case Technology::FTJ: return "FTJ";
  }
  return "?";
}

std::string_view to_string(Domain d) { return d == Domain::Electrical ? "electrical" : "optical"; }

std::string_view to_string(Polarity p) { return p == Polarity::Set ? "set" : "reset"; }

std::string_view to_string(ResistanceClass c) {
  switch (c) {
    case ResistanceClass::HRS: return "HRS";
    case ResistanceClass::LRS: return "LRS";
    case ResistanceClass::Intermediate: return "INTERMEDIATE";
  }
  return "?";
}

Technology parse_technology(std::string_view s) {
  if (s == "PCM") return Technology::PCM;
  if (s == "RRAM_CB") return Technology::RRAM_CB;
  if (s == "FTJ") return Technology::FTJ;
  throw ConfigError("unknown technology '" + std::string(s) + "'");
}

Domain parse_domain(std::string_view s) {
  if (s == "electrical") return Domain::Electrical;
  if (s == "optical") return Domain::Optical;
  throw ConfigError("unknown pulse domain '" + std::string(s) + "'");
}

void Pulse::validate() const {
  if (!(amplitude >= 0.0)) throw DomainError("pulse amplitude must be >= 0");
  if (!(duration > 0.0)) throw DomainError("pulse duration must be > 0");
}

void DeviceParams::validate() const {
  if (!(g_a > 0.0) || !(g_c > g_a)) throw InvariantError("device params need g_c > g_a > 0");
  if (!(tau_set > 0.0)) throw InvariantError("device params need tau_set > 0");
  if (!(v_set >= 0.0) || !(v_reset >= 0.0) || !(p_set >= 0.0) || !(p_reset >= 0.0)) {
    throw InvariantError("device thresholds must be >= 0");
  }
  if (!(drift_nu >= 0.0)) throw InvariantError("drift_nu must be >= 0");
  if (!(hrs_max_s >= 0.0 && hrs_max_s < lrs_min_s && lrs_min_s <= 1.0)) {
    throw InvariantError("resistance-class thresholds need 0 <= hrs_max_s < lrs_min_s <= 1");
  }
}

CellState apply_pulse(const CellState& state, const Pulse& pulse, const DeviceParams& params) {
  if (state.stuck) return state;

  double next = state.s;
  if (pulse.polarity == Polarity::Set) {
    if (pulse.amplitude >= params.set_threshold(pulse.domain)) {
      next = params.analog ? std::min(1.0, state.s + pulse.duration / params.tau_set) : 1.0;
    }
  } else if (pulse.amplitude >= params.reset_threshold(pulse.domain)) {
    next = 0.0;
  }

  if (next == state.s) return state;
  CellState out = state;
  out.s = next;
  ++out.cycle_count;
  if (out.cycle_count >= params.n_endurance) out.stuck = true;
  return out;
}

double conductance(const CellState& state, const DeviceParams& params,
                   std::optional<double> t_since_reset) {
  double g;
  if (state.s == 0.0) {
    g = params.g_a;
  } else if (state.s == 1.0) {
    g = params.g_c;
  } else {
    g = std::exp((1.0 - state.s) * std::log(params.g_a) + state.s * std::log(params.g_c));
  }
  if (params.drift_enabled() && t_since_reset) {
    const double t = *t_since_reset;
    if (!(t > 0.0)) throw DomainError("drift needs t_since_reset > 0");
    if (state.s < 1.0) g *= std::pow(t / 1.0, -params.drift_nu * (1.0 - state.s));
  }
  return g;
}

double state_for_conductance(double g, const DeviceParams& params) {
  if (g <= params.g_a) return 0.0;
  if (g >= params.g_c) return 1.0;
  return std::clamp(std::log(g / params.g_a) / std::log(params.g_c / params.g_a), 0.0, 1.0);
}

ResistanceClass resistance_class(const CellState& state, const DeviceParams& params) {
  if (state.s <= params.hrs_max_s) return ResistanceClass::HRS;
  if (state.s >= params.lrs_min_s) return ResistanceClass::LRS;
  return ResistanceClass::Intermediate;
}

}  // namespace pxbar
