#pragma once

#include <stdexcept>
#include <string>

namespace gridflex {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file (reports file and line where possible).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid network (dangling branch, missing slack, ...).
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Input data violates a documented contract (horizon, sign, schema).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical solver failed (non-convergence, singular system, stall).
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace gridflex
