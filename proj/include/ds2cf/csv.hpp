#ifndef DS2CF_CSV_HPP
#define DS2CF_CSV_HPP

#include <string>
#include <vector>

#include "ds2cf/types.hpp"

namespace ds2cf::csv {

// Shortest-round-trip decimal text for a double.
std::string format_double(double value);

// Writes a matrix as plain CSV; header_lines go first as '#' comments.
void write_matrix(const std::string& path, const Matrix& m,
                  const std::vector<std::string>& header_lines);

Matrix read_matrix(const std::string& path);

}  // namespace ds2cf::csv

#endif
