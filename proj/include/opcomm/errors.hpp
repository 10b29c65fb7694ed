#pragma once

#include <stdexcept>
#include <string>

namespace opcomm {

/// Bad caller input: shape mismatch, violated precondition, unparsable file.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A result would not be representable in double precision.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Checked 64-bit integer arithmetic in the exact engine overflowed.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

} // namespace opcomm
