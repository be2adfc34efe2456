#pragma once

#include <string>

namespace specshare {

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

}  // namespace specshare
