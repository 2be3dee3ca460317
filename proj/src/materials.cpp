#include "pxbar/materials.hpp"

#include "pxbar/csv.hpp"
#include "pxbar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>

namespace pxbar {

namespace {

constexpr const char* kHeader = "wavelength_nm,n_amorphous,k_amorphous,n_crystalline,k_crystalline";

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  const auto first = s.find_first_not_of(" \t");
  return first == std::string::npos ? std::string{} : s.substr(first);
}

}  // namespace

void validate(const MaterialRecord& record) {
  const auto& t = record.table;
  if (t.size() < 2) throw InvariantError(record.name + ": table needs at least 2 rows");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& row = t[i];
    if (i > 0 && !(row.wavelength_nm > t[i - 1].wavelength_nm)) {
      throw InvariantError(record.name + ": wavelengths not strictly increasing at row " +
                           std::to_string(i + 1));
    }
    if (!(row.n_amorphous > 0.0) || !(row.n_crystalline > 0.0)) {
      throw InvariantError(record.name + ": n must be positive at row " + std::to_string(i + 1));
    }
    if (!(row.k_amorphous >= 0.0) || !(row.k_crystalline >= 0.0)) {
      throw InvariantError(record.name + ": k must be nonnegative at row " + std::to_string(i + 1));
    }
  }
  if (!(record.g_amorphous > 0.0)) throw InvariantError(record.name + ": g_amorphous must be > 0");
  if (!(record.g_crystalline > record.g_amorphous)) {
    throw InvariantError(record.name + ": g_crystalline must exceed g_amorphous");
  }
}

MaterialRecord parse_material(std::istream& in, std::string name, double g_amorphous,
                              double g_crystalline) {
  MaterialRecord record;
  record.name = std::move(name);
  record.g_amorphous = g_amorphous;
  record.g_crystalline = g_crystalline;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw ParseError(record.name + ":" + std::to_string(line_no) + ": expected header '" +
                         kHeader + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = csv::split(line);
    if (fields.size() != 5) {
      throw ParseError(record.name + ":" + std::to_string(line_no) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    }
    double v[5];
    for (int i = 0; i < 5; ++i) {
      try {
        v[i] = csv::parse_double(fields[i]);
      } catch (const SchemaError& e) {
        throw ParseError(record.name + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    record.table.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  if (!header_seen) throw ParseError(record.name + ": missing header");
  validate(record);
  return record;
}

MaterialRecord load_material(const std::string& path, double g_amorphous, double g_crystalline) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open material file '" + path + "'");
  return parse_material(in, std::filesystem::path(path).stem().string(), g_amorphous,
                        g_crystalline);
}

ComplexIndex lookup_nk(const MaterialRecord& record, Phase phase, double wavelength_nm) {
  const auto& t = record.table;
  if (!(wavelength_nm >= t.front().wavelength_nm && wavelength_nm <= t.back().wavelength_nm)) {
    throw OutOfRange(record.name + ": wavelength " + csv::fmt(wavelength_nm) +
                     " nm outside table span");
  }
  const auto pick = [phase](const DispersionRow& r) {
    return phase == Phase::Amorphous ? ComplexIndex{r.n_amorphous, r.k_amorphous}
                                     : ComplexIndex{r.n_crystalline, r.k_crystalline};
  };
  // First row with wavelength >= query.
  auto hi = std::lower_bound(t.begin(), t.end(), wavelength_nm,
                             [](const DispersionRow& r, double w) { return r.wavelength_nm < w; });
  if (hi->wavelength_nm == wavelength_nm) return pick(*hi);
  auto lo = std::prev(hi);
  const double u = (wavelength_nm - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
  const auto a = pick(*lo);
  const auto b = pick(*hi);
  return {a.real() + u * (b.real() - a.real()), a.imag() + u * (b.imag() - a.imag())};
}

ComplexIndex mixed_index(double x, ComplexIndex amorphous, ComplexIndex crystalline) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("crystalline fraction outside [0,1]");
  if (x == 0.0) return amorphous;
  if (x == 1.0) return crystalline;
  const ComplexIndex eps = (1.0 - x) * amorphous * amorphous + x * crystalline * crystalline;
  // Principal root: Re >= 0, and Im >= 0 whenever Im eps >= 0 (n > 0, k >= 0
  // at both endpoints).
  return std::sqrt(eps);
}

}  // namespace pxbar
