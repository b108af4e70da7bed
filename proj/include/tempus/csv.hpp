#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tempus::csv {

using Row = std::vector<std::string>;

// Parses RFC 4180-style CSV (double-quoted fields, "" escapes). Blank lines
// and lines starting with '#' are skipped.
std::vector<Row> parse(std::string_view content, char delimiter = ',');

std::string escape(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace tempus::csv
