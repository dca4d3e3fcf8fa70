#pragma once

#include <stdexcept>
#include <string>

namespace ncfkit {

// Base class for every error thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument or ill-formed object (bad modulus, arity mismatch, ...).
struct domain_error : error {
    using error::error;
};

// Element arithmetic requested on a field that only supports counting.
struct mode_error : error {
    using error::error;
};

// A guarded computation would exceed its resource bound.
struct capacity_error : error {
    using error::error;
};

// Rejected text input; line and column are 1-based.
struct parse_error : error {
    parse_error(const std::string& msg, int line, int column)
        : error(msg), line(line), column(column) {}

    int line = 0;
    int column = 0;
};

} // namespace ncfkit
