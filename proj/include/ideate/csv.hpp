#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ideate::csv {

using Row = std::vector<std::string>;

/// Parse RFC-4180 CSV text. Accepts LF or CRLF line endings and quoted
/// fields containing delimiters, quotes ("" escape), and newlines.
/// A trailing newline does not produce an empty final row.
std::vector<Row> parse(std::string_view text);

/// Quote a field iff it contains a comma, quote, or newline.
std::string escape_field(std::string_view field);

/// Join fields into one CSV line, LF-terminated.
std::string format_row(const Row& row);

} // namespace ideate::csv
