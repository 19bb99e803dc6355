#pragma once

#include <string>

namespace banditrec {

// Number rendering rules for persisted artifacts:
//   format_real   - 12 significant digits, %g style, "-0" printed as "0".
//   format_exact  - shortest representation that parses back to the same double.
std::string format_real(double v);
std::string format_exact(double v);

// Rounds to the value format_real would print, so files round-trip exactly.
double quantize(double v);

}  // namespace banditrec
