#pragma once

#include <stdexcept>
#include <string>

namespace reur {

// Malformed input: wrong shape, broken invariant, bad parameter.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// A density matrix (or POVM element) with an eigenvalue below the PSD tolerance.
class InvalidState : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// A maximum-entropy fit has no solution or the solver did not converge.
class Infeasible : public std::runtime_error {
public:
    explicit Infeasible(const std::string &what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class UnsupportedFamily : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

} // namespace reur
