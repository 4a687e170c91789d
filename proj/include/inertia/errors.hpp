#pragma once

#include <stdexcept>
#include <string>

namespace inertia {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or argument is outside its documented domain.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A time series is too short or a requested window falls outside it.
class WindowError : public Error {
public:
    using Error::Error;
};

/// The integrator produced a non-finite state.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, double t)
        : Error(what + " (t = " + std::to_string(t) + " s)"), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// A model left its domain of validity (for example a stalled wind rotor).
class ModelValidityError : public Error {
public:
    using Error::Error;
};

/// An estimator's defining ratio has a vanishing denominator.
class UndefinedEstimate : public Error {
public:
    using Error::Error;
};

/// A least-squares or linear system does not have full rank.
class RankDeficient : public Error {
public:
    using Error::Error;
};

/// Input file content could not be parsed.
class MalformedInput : public Error {
public:
    using Error::Error;
};

}  // namespace inertia
