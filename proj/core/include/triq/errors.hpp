#pragma once

#include <stdexcept>
#include <string>

namespace triq {

// Base for failures raised by the numerics (as opposed to bad arguments,
// which use std::invalid_argument / std::out_of_range).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonHermitianError : public NumericalError {
public:
    NonHermitianError(const std::string& what, double asymmetry)
        : NumericalError(what), asymmetry_(asymmetry) {}
    double asymmetry() const noexcept { return asymmetry_; }

private:
    double asymmetry_;
};

class PhysicalityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace triq
