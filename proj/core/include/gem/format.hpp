#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gem::format {

/// Shortest round-trip decimal form, independent of the global locale.
std::string number(double value);
std::string number(long long value);

/// Fixed notation with `digits` decimals.
std::string fixed(double value, int digits);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace gem::format
