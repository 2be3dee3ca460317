#include "pxbar/optics.hpp"

#include "pxbar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pxbar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct IndexPair {
  ComplexIndex balanced;
  ComplexIndex current;
};

IndexPair indices(const WaveguideCellGeometry& geom, const MaterialRecord& mat, double x) {
  const auto a = lookup_nk(mat, Phase::Amorphous, geom.wavelength_nm);
  const auto c = lookup_nk(mat, Phase::Crystalline, geom.wavelength_nm);
  return {mixed_index(0.0, a, c), mixed_index(x, a, c)};
}

double side_sign(PcmSide side) { return side == PcmSide::Ridge ? 1.0 : -1.0; }

}  // namespace

std::string_view to_string(PcmSide side) { return side == PcmSide::Ridge ? "ridge" : "buffer"; }

PcmSide parse_pcm_side(std::string_view s) {
  if (s == "ridge") return PcmSide::Ridge;
  if (s == "buffer") return PcmSide::Buffer;
  throw ConfigError("pcm_side must be 'ridge' or 'buffer', got '" + std::string(s) + "'");
}

void WaveguideCellGeometry::validate() const {
  if (!(length_m > 0.0)) throw InvariantError("geometry: length must be > 0");
  if (!(wavelength_nm > 0.0)) throw InvariantError("geometry: wavelength must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvariantError("geometry: gamma must be in (0,1]");
  if (!(fill > 0.0 && fill <= 1.0)) throw InvariantError("geometry: fill must be in (0,1]");
  if (!(alpha_min >= 0.0)) throw InvariantError("geometry: alpha_min must be >= 0");
  if (!(c2 >= 0.0)) throw InvariantError("geometry: c2 must be >= 0");
  if (!(n_mode0 > 0.0)) throw InvariantError("geometry: n_mode0 must be > 0");
}

double mode_index_shift(const WaveguideCellGeometry& geom, const MaterialRecord& mat, double x) {
  const auto [balanced, current] = indices(geom, mat, x);
  return geom.gamma * geom.fill * (current.real() - balanced.real());
}

double imbalance(const WaveguideCellGeometry& geom, const MaterialRecord& mat, double x) {
  return side_sign(geom.pcm_side) * mode_index_shift(geom, mat, x);
}

double metal_loss(const WaveguideCellGeometry& geom, double delta_n) {
  return geom.alpha_min + geom.c2 * delta_n * delta_n;
}

double loss_coefficient(const WaveguideCellGeometry& geom, const MaterialRecord& mat, double x) {
  const auto [balanced, current] = indices(geom, mat, x);
  const double dn = side_sign(geom.pcm_side) * geom.gamma * geom.fill *
                    (current.real() - balanced.real());
  const double wavelength_m = geom.wavelength_nm * 1e-9;
  const double material = 4.0 * std::numbers::pi / wavelength_m * geom.gamma * geom.fill *
                          (current.imag() - balanced.imag());
  return std::max(metal_loss(geom, dn) + material, geom.alpha_min * 1e-3);
}

double propagation_length(double alpha_per_m) {
  if (!(alpha_per_m > 0.0)) throw DomainError("propagation length needs alpha > 0");
  return 1.0 / alpha_per_m;
}

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

CellOptics cell_transmission(const WaveguideCellGeometry& geom, const MaterialRecord& mat,
                             double x) {
  const double alpha = loss_coefficient(geom, mat, x);
  const double n_mode = geom.n_mode0 + mode_index_shift(geom, mat, x);
  const double wavelength_m = geom.wavelength_nm * 1e-9;
  return {std::exp(-alpha * geom.length_m), wrap_phase(kTwoPi / wavelength_m * n_mode * geom.length_m)};
}

}  // namespace pxbar
