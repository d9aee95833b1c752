#pragma once

#include <stdexcept>
#include <string>

namespace plc {

// Base for everything the library throws on purpose. The CLI maps the
// subclasses onto exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

struct VerificationError : Error {
    using Error::Error;
};

}  // namespace plc
