#pragma once

#include <stdexcept>
#include <string>

namespace nsum {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data: map files, key files, index sidecars.
class FormatError : public Error {
public:
    using Error::Error;
};

// A call whose arguments violate the operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Work refused because its estimated cost exceeds a configured guard.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

}  // namespace nsum
