#include "llano/csv.hpp"

#include "llano/error.hpp"

namespace llano::csv {

std::vector<Record> parse(std::string_view data) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    current.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current.clear();
    record_started = false;
  };

  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorKind::ParseError,
                      "unexpected quote in CSV field at line " + std::to_string(line));
        }
        in_quotes = true;
        field_was_quoted = true;
        record_started = true;
        break;
      case ',':
        end_field();
        record_started = true;
        break;
      case '\r':
        if (i + 1 < data.size() && data[i + 1] == '\n') break;
        field.push_back(c);
        record_started = true;
        break;
      case '\n':
        ++line;
        if (record_started || !field.empty()) {
          end_record();
        }
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorKind::ParseError,
                      "text after closing quote at line " + std::to_string(line));
        }
        field.push_back(c);
        record_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::ParseError, "unterminated quoted field");
  }
  if (record_started || !field.empty()) end_record();
  return records;
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_record(const Record& record) {
  std::string out;
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (i) out.push_back(',');
    out += escape_field(record[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace llano::csv
