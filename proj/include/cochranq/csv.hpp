#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cochranq::csv {

/// One physical record of a CSV file together with its 1-based line number.
struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Splits RFC 4180 text into records. Accepts LF and CRLF line endings and
/// skips blank lines. Quoted fields may contain commas, quotes ("") and
/// newlines. Throws ParseError on an unterminated quote.
std::vector<Record> read(std::string_view text);

/// Quotes `field` only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins escaped fields with commas (no trailing newline).
std::string join(const std::vector<std::string>& fields);

}  // namespace cochranq::csv
