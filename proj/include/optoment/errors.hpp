// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace optoment {

// A model that has no stationary state, or whose steady-state quantities were
// requested outside the stable region.
class UnstableModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Covariance or density-matrix entries blew past the overflow guard.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Eigenmode classification could not separate dark and bright modes.
class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncated Fock space lost too much population to its top levels.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace optoment
