#pragma once

#include <stdexcept>
#include <string>

namespace landscape {

/// Precondition or configuration violations.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite or otherwise unusable result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace landscape

namespace landscape {

/// File could not be opened, written or parsed; the message carries the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace landscape
