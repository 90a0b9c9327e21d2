#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dnls {

/// Invalid parameters or configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class NumericalFailure {
    NonHyperbolic,
    DegenerateEigenspace,
    ComplexSpectrum,
    Resonance,
    Overflow,
    Divergence,
};

std::string_view to_string(NumericalFailure kind);

/// A computation that was well posed but could not be carried out in
/// floating point (resonant denominators, overflow, non-hyperbolic origin).
class NumericalError : public std::runtime_error {
public:
    NumericalError(NumericalFailure kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    NumericalFailure kind() const noexcept { return kind_; }

private:
    NumericalFailure kind_;
};

}  // namespace dnls
