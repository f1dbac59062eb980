#pragma once

#include <string>

namespace sgsim {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace sgsim
