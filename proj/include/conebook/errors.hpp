#pragma once

#include <stdexcept>
#include <string>

namespace conebook {

// Configuration / validation problems. The CLI maps these to exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical / domain problems raised by the computation modules.
// The CLI maps these to exit status 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// theta() and dtheta() are undefined on the binding {z2 = 0}.
struct BindingPointError : NumericalError {
    using NumericalError::NumericalError;
};

struct ZeroVectorError : NumericalError {
    using NumericalError::NumericalError;
};

// The direction set spans more than an open half-space, so no enclosing
// cone with half-angle < pi/2 exists.
struct NoEnclosingConeError : NumericalError {
    using NumericalError::NumericalError;
};

struct AngleOutOfRangeError : NumericalError {
    using NumericalError::NumericalError;
};

struct QuadratureDivergenceError : NumericalError {
    using NumericalError::NumericalError;
};

struct NonIntegrableTauError : NumericalError {
    using NumericalError::NumericalError;
};

struct EmptyAError : NumericalError {
    using NumericalError::NumericalError;
};

struct FieldDegenerateError : NumericalError {
    using NumericalError::NumericalError;
};

struct StuckAtBindingError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace conebook
