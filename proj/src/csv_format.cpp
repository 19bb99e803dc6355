#include <fmt/format.h>

#include <string>

#include "banditrec/csv.hpp"
#include "banditrec/format.hpp"

namespace banditrec {
namespace csv {

bool split(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return !quoted;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace csv

std::string format_real(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.12g}", v);
}

std::string format_exact(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{}", v);
}

double quantize(double v) {
  if (v == 0.0) return 0.0;
  return std::stod(format_real(v));
}

}  // namespace banditrec
