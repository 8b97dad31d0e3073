// SPDX-License-Identifier: Apache-2.0
#include "ulp/common/error.hpp"
#include "ulp/common/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace ulp {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Dimension: return "dimension error";
        case ErrorKind::Contract: return "contract error";
        case ErrorKind::Numeric: return "numeric error";
        case ErrorKind::Range: return "range error";
        case ErrorKind::Config: return "configuration error";
        case ErrorKind::Schema: return "schema error";
        case ErrorKind::Data: return "data error";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::Usage: return "usage error";
    }
    return "error";
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    // -0.00 would otherwise leak into reports for tiny negative values
    if (std::fabs(value) < 0.5 * std::pow(10.0, -decimals)) value = 0.0;
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    return std::string(buf, end);
}

std::string_view trim(std::string_view text) {
    const auto ws = " \t\r\n";
    const auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

std::optional<long long> parse_int(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

}  // namespace ulp
