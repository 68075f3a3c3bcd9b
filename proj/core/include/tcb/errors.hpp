#pragma once

#include <stdexcept>
#include <string>

namespace tcb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: invalid arguments, malformed files, inconsistent config.
/// The CLI maps this to exit code 2; anything else exits 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace tcb
