#pragma once

#include <stdexcept>
#include <string>

namespace affine_smile {

/// Base for every failure raised by the numerical core.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity overflowed the representable range (e.g. E[e^{θY}] at huge θ).
class RangeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Argument lies outside the region where the operation is defined.
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The adaptive integrator could not make progress and the state is not blowing up.
class StepSizeUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The parameters sit in a regime the closed forms do not cover.
class ModelRegimeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Invalid model parameters or configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace affine_smile
