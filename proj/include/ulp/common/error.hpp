// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ulp {

enum class ErrorKind {
    Dimension,  // tensor shapes disagree
    Contract,   // API misuse (backward twice, missing grad, ...)
    Numeric,    // NaN/Inf, diverging loss
    Range,      // argument outside its domain
    Config,     // invalid link / model / scenario configuration
    Schema,     // missing column or feature
    Data,       // malformed or invariant-violating rows
    Io,         // unreadable / unwritable file
    Usage,      // bad command line
};

const char* to_string(ErrorKind kind) noexcept;

/// Every error raised by the toolkit. The message is prefixed with the
/// module that raised it, e.g. "trace-data: missing column 'rb_alloc'".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ulp
