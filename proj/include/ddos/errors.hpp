#ifndef DDOS_ERRORS_HPP
#define DDOS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ddos {

// Base for every error the library raises on bad data or configuration.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (negative byte counts, bad CSV rows, ...).
class InputError : public Error {
public:
    using Error::Error;
};

// A value lies outside the domain of a model family (e.g. x <= 0 for power).
class DomainError : public Error {
public:
    using Error::Error;
};

// Data carries too little information: all-equal x, zero variance, single-flow windows.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Not enough windows / runs / samples to do the requested estimation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Invalid scenario or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace ddos

#endif  // DDOS_ERRORS_HPP
