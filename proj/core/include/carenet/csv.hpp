#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace carenet {

/// Shortest decimal text that reads back to the same double; "nan" for NaN.
std::string format_double(double value);

/// Splits one CSV line on commas (no quoting), trimming spaces and a trailing CR.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace carenet
