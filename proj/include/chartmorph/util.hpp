#ifndef CHARTMORPH_UTIL_HPP
#define CHARTMORPH_UTIL_HPP

#include <string>

namespace chartmorph {

// Shortest text that reads back to the same double.
std::string format_number(double value);

// Fixed 3-decimal text with trailing zeros trimmed ("12.5", "-0" -> "0").
std::string format_fixed3(double value);

bool nearly_equal(double a, double b, double relTol = 1e-9);

} // namespace chartmorph

#endif
