#include "tempus/csv.hpp"

#include "tempus/error.hpp"

namespace tempus::csv {

std::vector<Row> parse(std::string_view content, char delimiter) {
  std::vector<Row> rows;
  std::size_t i = 0;
  const std::size_t n = content.size();
  std::size_t line = 1;
  while (i < n) {
    // Skip blank and comment lines.
    if (content[i] == '\n' || content[i] == '\r') {
      if (content[i] == '\n') ++line;
      ++i;
      continue;
    }
    if (content[i] == '#') {
      while (i < n && content[i] != '\n') ++i;
      continue;
    }
    Row row;
    std::string field;
    bool quoted = false;
    for (;;) {
      if (i >= n) {
        if (quoted) fail(ErrorKind::Validation, "unterminated quote at line " + std::to_string(line));
        row.push_back(std::move(field));
        break;
      }
      const char c = content[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < n && content[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            quoted = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        continue;
      }
      if (c == '"' && field.empty()) {
        quoted = true;
        ++i;
      } else if (c == delimiter) {
        row.push_back(std::move(field));
        field.clear();
        ++i;
      } else if (c == '\n' || c == '\r') {
        row.push_back(std::move(field));
        if (c == '\r' && i + 1 < n && content[i + 1] == '\n') ++i;
        ++i;
        ++line;
        break;
      } else {
        field.push_back(c);
        ++i;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace tempus::csv
