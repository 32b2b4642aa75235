#pragma once

#include <stdexcept>
#include <string>

namespace minres {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the region where a formula is defined.
struct DomainError : Error {
    using Error::Error;
};

struct ContractionFailure : Error {
    using Error::Error;
};

// The trajectory left the region where the right-hand side is finite.
struct BlowUp : Error {
    BlowUp(const std::string& what, double reached)
        : Error(what), reached_t(reached) {}
    double reached_t;
};

struct NoRoot : Error {
    using Error::Error;
};

// alpha (equivalently p0) outside the range where the switching point is known to exist.
struct ValidityError : Error {
    using Error::Error;
};

struct InconsistentScale : Error {
    using Error::Error;
};

struct SignChange : Error {
    SignChange(const std::string& what, double where) : Error(what), q(where) {}
    double q;
};

struct EvaluationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace minres
