#include "cgbath/bath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cgbath/errors.hpp"

namespace cgbath {

void BathSpectrum::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and positive");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw DomainError("omega_c must be finite and positive");
}

double spectral_density(const BathSpectrum& bath, double omega) {
    if (!std::isfinite(omega)) throw DomainError("spectral_density: frequency must be finite");
    const double x = bath.beta * omega;
    double bose;  // omega / (1 - e^{-beta omega})
    if (std::abs(x) < 1e-6) {
        bose = (1.0 + x / 2.0 + x * x / 12.0) / bath.beta;
    } else {
        bose = omega / -std::expm1(-x);
    }
    return std::exp(-std::abs(omega) / bath.omega_c) * bose;
}

namespace {

cd expm1(cd z) {
    if (std::abs(z) < 0.1) {
        // Taylor series to 12 terms is exact to double precision for |z| < 0.1.
        cd term = z;
        cd sum = z;
        for (int n = 2; n <= 12; ++n) {
            term *= z / static_cast<double>(n);
            sum += term;
        }
        return sum;
    }
    return std::exp(z) - 1.0;
}

}  // namespace

cd spectral_density_analytic(const BathSpectrum& bath, cd omega, bool positive_branch) {
    const cd cutoff = std::exp((positive_branch ? -omega : omega) / bath.omega_c);
    return cutoff * omega / -expm1(-bath.beta * omega);
}

double omega_coth(double beta, double omega) {
    const double x = beta * omega;
    if (std::abs(x) < 1e-4) {
        // (x/2) coth(x/2) = 1 + x^2/12 - x^4/720
        const double x2 = x * x;
        return (2.0 / beta) * (1.0 + x2 / 12.0 - x2 * x2 / 720.0);
    }
    return omega / std::tanh(0.5 * x);
}

CorrelationValue correlation(const BathSpectrum& bath, double t, const quad::QuadratureConfig& cfg) {
    bath.validate();
    if (!std::isfinite(t)) throw DomainError("correlation: time must be finite");
    const double wc = bath.omega_c;
    const double w_max = wc * std::log(1.0 / std::numeric_limits<double>::epsilon());

    quad::RealIntegrand f = [&](double w) {
        const double damp = std::exp(-w / wc);
        return cd(damp * omega_coth(bath.beta, w) * std::cos(w * t), -damp * w * std::sin(w * t));
    };

    std::vector<double> breaks;
    if (t != 0.0) {
        const double period = std::numbers::pi / std::abs(t);
        for (double k = 1.0; k * period < w_max; k += 1.0) breaks.push_back(k * period);
    }
    // Features at the thermal scale and at the cutoff.
    for (double w : {1.0 / bath.beta, wc, 4.0 * wc}) {
        if (w < w_max) breaks.push_back(w);
    }
    std::sort(breaks.begin(), breaks.end());
    quad::QuadratureResult r = quad::integrate_interval(f, 0.0, w_max, cfg, breaks);

    // int_W^inf w e^{-w/wc} (coth + 1) dw <= (coth(beta W/2) + 1) wc (W + wc) e^{-W/wc}
    const double tail = (1.0 / std::tanh(0.5 * bath.beta * w_max) + 1.0) * wc * (w_max + wc) * std::exp(-w_max / wc);
    // Rounding of the phase w t perturbs each sample by about eps |w t| of its
    // size; bounded with w coth(beta w / 2) <= w + 2 / beta.
    const double wc2 = wc * wc;
    const double phase = std::numeric_limits<double>::epsilon() *
                         (std::abs(t) * (2.0 * wc2 * wc + 2.0 * wc2 / bath.beta) + wc2 + 2.0 * wc / bath.beta);
    return {r.value, r.error + tail + phase};
}

cd trigamma(cd z) {
    if (!(z.real() > 0.0)) throw DomainError("trigamma: requires Re z > 0");
    cd acc{};
    while (std::abs(z) < 15.0) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // psi'(z) ~ 1/z + 1/(2 z^2) + sum_k B_{2k} / z^{2k+1}
    static constexpr std::array<double, 8> bern = {1.0 / 6.0,     -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                                   5.0 / 66.0,    -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};
    const cd inv = 1.0 / z;
    const cd inv2 = inv * inv;
    cd series{};
    cd pw = inv * inv2;
    for (double b : bern) {
        series += b * pw;
        pw *= inv2;
    }
    return acc + inv + 0.5 * inv2 + series;
}

cd correlation_closed_form(const BathSpectrum& bath, double t) {
    const double s = bath.correlation_time();
    const cd zero_temp = 1.0 / ((s + cd(0.0, t)) * (s + cd(0.0, t)));
    const cd z = 1.0 + cd(s, t) / bath.beta;
    const double thermal = 2.0 / (bath.beta * bath.beta) * trigamma(z).real();
    return zero_temp + thermal;
}

double correlation_imag_closed_form(const BathSpectrum& bath, double t) {
    const double s = bath.correlation_time();
    const double d = s * s + t * t;
    return -2.0 * s * t / (d * d);
}

}  // namespace cgbath
