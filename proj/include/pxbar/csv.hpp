#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pxbar::csv {

// Splits one line on commas and trims surrounding whitespace of each field.
std::vector<std::string> split(std::string_view line);

// Strict parse of a full field as double; throws SchemaError on junk.
double parse_double(std::string_view field);

// 12 significant digits, the precision used by every CSV the tools write.
std::string fmt(double value);

// Numeric table reader for matrix / vector input files. Blank lines and
// lines starting with '#' are skipped. A first line that does not parse as
// numbers is treated as a header and skipped as well.
Eigen::MatrixXd read_matrix(const std::string& path);
Eigen::VectorXd read_vector(const std::string& path);

// Lines of a text file, used by the schema-specific readers.
std::vector<std::string> read_lines(const std::string& path);

}  // namespace pxbar::csv
