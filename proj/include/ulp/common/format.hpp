// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ulp {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Strict full-string parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace ulp
