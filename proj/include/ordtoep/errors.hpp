#pragma once

#include <stdexcept>
#include <string>

namespace ordtoep {

/// Malformed or unsupported input (order spec, symbol spec, config file).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A lattice point or symbol uses coordinates outside the order's dimension.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A {count: n} window was requested on an order without a least positive element.
class CountNotEnumerable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class NumericalFailure { OriginTooClose, StepTooCoarse };

class NumericalError : public std::runtime_error {
public:
    NumericalError(NumericalFailure kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    NumericalFailure kind() const noexcept { return kind_; }

private:
    NumericalFailure kind_;
};

}  // namespace ordtoep
