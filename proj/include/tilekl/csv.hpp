#pragma once

#include <string>
#include <string_view>

namespace tilekl {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Quotes the field when it holds a comma, quote or line break.
std::string csv_field(std::string_view field);

}  // namespace tilekl
