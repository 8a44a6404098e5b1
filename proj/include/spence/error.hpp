#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spence {

/// Base class of every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (bad index, partial assignment, invalid parameters).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A solve exceeded its deadline. Never carries a verdict.
class TimeoutError : public Error {
public:
    TimeoutError() : Error("solver deadline exceeded") {}
};

/// An external solver claimed SAT with a model that does not satisfy the formula.
class SolverIntegrityError : public Error {
public:
    using Error::Error;
};

/// The external solver process could not be run or exited abnormally.
class ExternalProcessError : public Error {
public:
    using Error::Error;
};

/// The external solver produced output without a recognizable verdict.
class ExternalOutputError : public Error {
public:
    using Error::Error;
};

/// Minimal-unsatisfiability analysis was requested for a satisfiable formula.
class NotUnsatError : public Error {
public:
    NotUnsatError() : Error("formula is satisfiable; minimal unsatisfiability is undefined") {}
};

} // namespace spence
