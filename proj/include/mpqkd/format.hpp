#pragma once

#include <string>

namespace mpqkd {

// Shortest decimal form that parses back to the same double; "inf", "-inf", "nan" otherwise.
std::string fmt_num(double x);

// Strict parse of a full string as a double (accepts the fmt_num spellings).
double parse_num(const std::string& s);

}  // namespace mpqkd
