#pragma once

#include "pxbar/materials.hpp"

#include <string_view>

namespace pxbar {

// Which side of the metal stripe holds the switching material. Ridge is the
// "normal" design, buffer the "inverse" one; they differ only in the sign of
// the imbalance.
enum class PcmSide { Ridge, Buffer };

std::string_view to_string(PcmSide side);
PcmSide parse_pcm_side(std::string_view s);

// Phenomenological description of one waveguide cell of the plasmonic
// crossbar. The balance point (equal mode indices above and below the metal
// stripe) sits at a fully amorphous switching material.
struct WaveguideCellGeometry {
  double length_m = 0.0;
  double wavelength_nm = 0.0;
  double gamma = 1.0;           // confinement factor in the switching material
  double fill = 1.0;            // volume fraction of switching material on its side
  PcmSide pcm_side = PcmSide::Ridge;
  double alpha_min = 0.0;       // 1/m, residual loss at balance
  double c2 = 0.0;              // 1/m per RIU^2
  double n_mode0 = 1.0;         // balanced mode effective index

  void validate() const;
};

struct CellOptics {
  double transmission;  // power, (0, 1]
  double phase_rad;     // [0, 2 pi)
};

// Signed imbalance between the mode indices above and below the stripe.
double imbalance(const WaveguideCellGeometry& geom, const MaterialRecord& mat, double x);

// Unsigned mode-index shift relative to the balanced cell.
double mode_index_shift(const WaveguideCellGeometry& geom, const MaterialRecord& mat, double x);

// Loss from the metal alone: alpha_min + c2 * dn^2.
double metal_loss(const WaveguideCellGeometry& geom, double delta_n);

// Metal term plus the material absorption relative to the balanced cell,
// clamped below at alpha_min * 1e-3.
double loss_coefficient(const WaveguideCellGeometry& geom, const MaterialRecord& mat, double x);

// 1/e power decay length; DomainError for alpha <= 0.
double propagation_length(double alpha_per_m);

CellOptics cell_transmission(const WaveguideCellGeometry& geom, const MaterialRecord& mat,
                             double x);

// Wraps a phase into [0, 2 pi).
double wrap_phase(double phi);

}  // namespace pxbar
