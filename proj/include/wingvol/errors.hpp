#pragma once

#include <stdexcept>
#include <string>

namespace wingvol {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for non-finite or out-of-range arguments.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class PriceOutOfBounds : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// An asymptotic formula was evaluated outside the region where it is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

class GridTooShort : public Error {
public:
    using Error::Error;
};

class NonPositiveSample : public Error {
public:
    using Error::Error;
};

class InvalidIndex : public Error {
public:
    using Error::Error;
};

class WrongSide : public Error {
public:
    using Error::Error;
};

class DivergentMoment : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

/// Complex argument lies outside the strip where the characteristic function is finite.
class OutsideStrip : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace detail

}  // namespace wingvol
