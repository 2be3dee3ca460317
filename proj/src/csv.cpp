#include "pxbar/csv.hpp"

#include "pxbar/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace pxbar::csv {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

bool try_parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  for (const auto& field : split(line)) {
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return false;
    out.push_back(v);
  }
  return !out.empty();
}

}  // namespace

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    const auto piece = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    fields.emplace_back(trim(piece));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

double parse_double(std::string_view field) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw SchemaError("not a number: '" + std::string(field) + "'");
  }
  return v;
}

std::string fmt(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0 so reruns and sign flips print alike
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  std::vector<double> parsed;
  bool seen_content = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_skippable(lines[i])) continue;
    const bool ok = try_parse_row(lines[i], parsed);
    if (!ok) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw SchemaError(path + ":" + std::to_string(i + 1) + ": non-numeric row");
    }
    seen_content = true;
    if (!rows.empty() && parsed.size() != rows.front().size()) {
      throw SchemaError(path + ":" + std::to_string(i + 1) + ": expected " +
                        std::to_string(rows.front().size()) + " columns, got " +
                        std::to_string(parsed.size()));
    }
    rows.push_back(parsed);
  }
  if (rows.empty()) throw SchemaError(path + ": no numeric rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

Eigen::VectorXd read_vector(const std::string& path) {
  const auto m = read_matrix(path);
  if (m.rows() != 1 && m.cols() != 1) {
    throw SchemaError(path + ": expected a single row or a single column");
  }
  return m.reshaped();
}

}  // namespace pxbar::csv
