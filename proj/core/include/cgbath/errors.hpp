#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cgbath {

/// Invalid argument or configuration (non-finite input, out-of-range parameter).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Quadrature failed to reach its tolerance. Carries the best estimate so
/// callers may decide whether the partial result is still usable.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::complex<double> estimate, double error_estimate)
        : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    std::complex<double> estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    std::complex<double> estimate_;
    double error_estimate_;
};

/// A computed quantity violates a structural property it must satisfy by
/// construction (Hermiticity, positivity, reality). Signals a bug in a
/// convention or an under-resolved integral, never a physical regime.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A trajectory state left the set of density matrices.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Reading or writing an output destination failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cgbath
