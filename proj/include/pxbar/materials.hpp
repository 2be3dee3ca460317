#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace pxbar {

using ComplexIndex = std::complex<double>;

enum class Phase { Amorphous, Crystalline };

struct DispersionRow {
  double wavelength_nm;
  double n_amorphous;
  double k_amorphous;
  double n_crystalline;
  double k_crystalline;
};

// Optical dispersion of a switching material in both phases plus the
// electrical conductance of a unit cell at the two phase endpoints.
struct MaterialRecord {
  std::string name;
  std::vector<DispersionRow> table;
  double g_amorphous = 0.0;    // S
  double g_crystalline = 0.0;  // S

  double contrast() const { return g_crystalline / g_amorphous; }
  double min_wavelength_nm() const { return table.front().wavelength_nm; }
  double max_wavelength_nm() const { return table.back().wavelength_nm; }
};

// Throws InvariantError if the record breaks any of: >= 2 rows, strictly
// increasing wavelengths, n > 0, k >= 0, g_crystalline > g_amorphous > 0.
void validate(const MaterialRecord& record);

// Reads the `wavelength_nm,n_amorphous,k_amorphous,n_crystalline,k_crystalline`
// table. '#' lines are comments. Electrical endpoints come from the caller
// (they live in the experiment config, not in the CSV).
MaterialRecord parse_material(std::istream& in, std::string name, double g_amorphous,
                              double g_crystalline);
MaterialRecord load_material(const std::string& path, double g_amorphous, double g_crystalline);

// Linear interpolation of n and k separately; exact at table nodes.
ComplexIndex lookup_nk(const MaterialRecord& record, Phase phase, double wavelength_nm);

// Volume-weighted complex permittivity mix of the two phases at crystalline
// fraction x, returned as the principal root (Re >= 0, Im >= 0).
ComplexIndex mixed_index(double x, ComplexIndex amorphous, ComplexIndex crystalline);

}  // namespace pxbar
