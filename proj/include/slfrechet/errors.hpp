#pragma once

#include <stdexcept>
#include <string>

namespace slf {

// Malformed or out-of-range input (bad grid, boundary angles, expressions, files).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: integrator blow-up, missing bracket, broken invariant.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two routes for the same derivative disagree beyond tolerance.
class RouteAgreementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace slf
