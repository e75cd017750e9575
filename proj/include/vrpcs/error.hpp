#pragma once

#include <stdexcept>
#include <string>

namespace vrpcs {

// Base of every error the toolkit throws on purpose.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (bad JSON, wrong sizes, demand above capacity, ...).
class InputError : public Error {
  public:
    using Error::Error;
};

// A solution refers to node indices the instance does not have. Distinct from infeasibility.
class StructuralError : public InputError {
  public:
    using InputError::InputError;
};

// Invalid configuration values (non-positive delta, missing stations, zero restarts, ...).
class ConfigError : public InputError {
  public:
    using InputError::InputError;
};

// No assignment of customers into at most m capacity-feasible routes exists
// (or the heuristic could not reach one).
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

// Instance exceeds the guard of an exhaustive method.
class SizeLimitError : public Error {
  public:
    using Error::Error;
};

} // namespace vrpcs
