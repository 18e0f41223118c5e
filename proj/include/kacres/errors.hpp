#pragma once

#include <stdexcept>
#include <string>

namespace kacres {

/// Malformed textual input (diagram strings, run lists, JSON payloads).
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A local diagram pattern required by a rewrite does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Checked 64-bit arithmetic would wrap.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// An internal invariant failed. Reaching this is a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace kacres
