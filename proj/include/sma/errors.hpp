#pragma once

#include <stdexcept>
#include <string>

namespace sma {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid arguments: shape mismatches, out-of-range indices, bad enum combinations.
struct value_error : error {
    using error::error;
};

// Non-finite values or diverging iterations.
struct numeric_error : error {
    using error::error;
};

// Failure while reading a video file, with a machine-checkable reason.
struct load_error : error {
    enum class reason {
        unreadable,
        bad_magic,
        bad_version,
        truncated,
        bad_pgm,
        inconsistent_dims,
        non_finite,
    };

    load_error(reason r, const std::string& msg) : error(msg), why(r) {}

    reason why;
};

// Failure while writing an output file.
struct io_error : error {
    using error::error;
};

} // namespace sma
