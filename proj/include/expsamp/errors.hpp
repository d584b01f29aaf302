#pragma once

#include <stdexcept>
#include <string>

namespace expsamp {

/// Evaluation produced a non-finite value.
struct NumericDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A quadrature or truncated sum could not reach its accuracy budget.
struct ToleranceNotMet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A kernel condition ((chi3) summability range etc.) is violated by the request.
struct ConditionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidGrid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Too few usable rows for a rate fit.
struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All errors sit at the numeric floor; a rate is meaningless (exact reproduction).
struct AtNumericFloor : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A machine-checked theorem bound was violated; implementation or certification bug.
struct BoundViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace expsamp
