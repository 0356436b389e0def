#pragma once

// Ohmic bosonic bath with exponential (Debye) cutoff, in units hbar = k_B = 1.
//
// Two equivalent representations are provided:
//   G(t) = int_0^inf dw e^{-w/wc} w (coth(beta w / 2) cos(w t) - i sin(w t))
//        = int_{-inf}^{inf} dw g(w) e^{-i w t},
//   g(w) = e^{-|w|/wc} w / (1 - e^{-beta w}).

#include <complex>

#include "cgbath/quadrature.hpp"

namespace cgbath {

using cd = std::complex<double>;

struct BathSpectrum {
    double beta = 1.0;     ///< inverse temperature
    double omega_c = 1.0;  ///< Debye cutoff frequency

    /// Throws DomainError unless beta and omega_c are finite and positive.
    void validate() const;

    /// 1 / omega_c; the width of the correlation function at zero temperature.
    double correlation_time() const noexcept { return 1.0 / omega_c; }

    friend bool operator==(const BathSpectrum&, const BathSpectrum&) = default;
};

/// g(w). Smooth and strictly positive; g(0) = 1/beta. Satisfies detailed
/// balance g(-w) = e^{-beta w} g(w).
double spectral_density(const BathSpectrum& bath, double omega);

/// g continued to complex frequencies on either half plane, with the cutoff
/// e^{-w/wc} (Re w > 0, positive_branch) or e^{w/wc} (Re w < 0) as selected. Used by
/// contour-rotated tail integrals; analytic away from the poles 2 pi i n / beta.
cd spectral_density_analytic(const BathSpectrum& bath, cd omega, bool positive_branch);

/// w coth(beta w / 2), with the removable point at w = 0 handled by series.
double omega_coth(double beta, double omega);

struct CorrelationValue {
    cd value;
    double error;
};

/// G(t) by direct quadrature of the half-line frequency integral. The integral
/// is truncated at omega_c ln(1/eps_mach) with the analytic tail bound added to
/// the reported error, as is the rounding error of the phase w t, which grows
/// like eps |t| omega_c^3 and limits this route at large t omega_c. Throws
/// NumericalError if the tolerance is not reached.
CorrelationValue correlation(const BathSpectrum& bath, double t, const quad::QuadratureConfig& cfg = {});

/// G(t) from the series coth(x/2) = 1 + 2 sum_n e^{-n x}, summed in closed form:
///   G(t) = 1/(s + i t)^2 + (2 / beta^2) Re psi'(1 + (s + i t)/beta),  s = 1/omega_c.
/// Accurate to a few ulps; this is the evaluator used inside 2-D time integrals.
cd correlation_closed_form(const BathSpectrum& bath, double t);

/// Im G(t) = -2 s t / (s^2 + t^2)^2 with s = 1/omega_c.
double correlation_imag_closed_form(const BathSpectrum& bath, double t);

/// Trigamma function psi'(z) for Re z > 0.
cd trigamma(cd z);

}  // namespace cgbath
