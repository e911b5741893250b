#include "cochranq/csv.hpp"

#include "cochranq/error.hpp"

namespace cochranq {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(
          (line == 0 ? std::string()
                     : "line " + std::to_string(line) +
                           (column == 0 ? std::string() : ", column " + std::to_string(column)) +
                           ": ") +
          message),
      line_(line),
      column_(column) {}

namespace csv {

std::vector<Record> read(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // anything seen on this record
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    if (field_started || !current.fields.empty()) {
      current.fields.push_back(std::move(field));
      current.line = record_line;
      records.push_back(std::move(current));
    }
    current = Record{};
    field.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
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
        if (!field_started) record_line = line;
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        if (!field_started) record_line = line;
        current.fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        if (!field_started) record_line = line;
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError(record_line, 0, "unterminated quoted field");
  end_record();
  return records;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace csv
}  // namespace cochranq
