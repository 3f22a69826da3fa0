#pragma once

#include <stdexcept>
#include <string>

namespace evo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested operation needs a finite field (or a field kind that is not implemented).
class UnsupportedField : public Error {
public:
    using Error::Error;
};

/// Input shape or value violates an operation's contract.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An enumeration or search hit its configured cap.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Two computations that must agree did not. Always a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace evo
