#pragma once

#include <string>

namespace epr::io {

// Round-trip-exact decimal form of a double ("%.17g").
std::string fmt_double(double v);

}  // namespace epr::io
