#pragma once

#include <string>
#include <string_view>

namespace blowup {

/// Shortest decimal string that parses back to the same double.
std::string format_real(double x);

/// Parses a full decimal string; throws InvalidArgument on trailing junk.
double parse_real(std::string_view text);

}  // namespace blowup
