#pragma once

#include <stdexcept>

namespace remcorr {

// Precondition violations on user-supplied parameters (chain length, phi, control angles, grids).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Eigensolver breakdown or a degenerate spectrum where simplicity is required.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An entropy/sqrt argument left its analytic range by more than rounding allows.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NoMaximumFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingSubdomain : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace remcorr
