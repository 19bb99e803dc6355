#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace banditrec::csv {

// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
// Returns false on an unterminated quote.
bool split(std::string_view line, std::vector<std::string>& fields);

// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace banditrec::csv
