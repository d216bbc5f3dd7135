#pragma once

// Minimal RFC 4180 reader/writer. Accepts LF or CRLF record separators;
// quoted fields may contain separators, quotes ("") and raw newlines.

#include <string>
#include <string_view>
#include <vector>

namespace llano::csv {

using Record = std::vector<std::string>;

// Throws Error(ParseError) on an unterminated quote or stray quote
// inside an unquoted field. A trailing empty line is not a record.
std::vector<Record> parse(std::string_view data);

std::string escape_field(std::string_view field);
std::string format_record(const Record& record);

}  // namespace llano::csv
