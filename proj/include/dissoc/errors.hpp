#pragma once

#include <stdexcept>
#include <string>

namespace dissoc {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input: dimension mismatch, coordinate
// magnitude outside the safe bound, bad group descriptor, duplicate
// elements, violated operation precondition.
struct InputError : Error {
    using Error::Error;
};

// A configured size or capacity limit was exceeded (enumeration cost or
// memory budget).
struct LimitError : Error {
    using Error::Error;
};

// decompose(): the target element has no {-1,0,1} representation over
// the given set.
struct NoRepresentation : Error {
    using Error::Error;
};

// construct(): no sampled candidate passed the covering check.
struct ExhaustedTrials : Error {
    ExhaustedTrials(const std::string& what, int failed_trials)
        : Error(what), failed_trials(failed_trials) {}
    int failed_trials;
};

}  // namespace dissoc
