#pragma once

#include <string>
#include <vector>

namespace dilaton::csv {

// Full double precision, shortest faithful form up to 17 significant
// digits, '.' decimal separator independent of locale.
std::string format_double(double value);

// Comma-separated row, LF terminated.
std::string row(const std::vector<std::string>& cells);
std::string row_values(const std::vector<double>& values);

}  // namespace dilaton::csv
