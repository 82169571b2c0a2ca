#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fraudclust::csv {

// Splits one CSV line into fields. Supports RFC 4180 double-quoted fields
// (embedded commas and doubled quotes) but not fields spanning lines.
// Throws std::runtime_error on an unterminated quote.
std::vector<std::string> split_line(std::string_view line);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace fraudclust::csv
