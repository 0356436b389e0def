#include "cgbath/witness.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cgbath/errors.hpp"
#include "cgbath/math.hpp"

namespace cgbath {

using std::numbers::pi;

namespace {

WitnessReport assemble(double d11, double d22, cd d12_mm, cd d21_pp, cd h12_mm, cd h21_pp, bool with_h) {
    WitnessReport r;
    r.d11_mm = d11;
    r.d22_pp = d22;
    r.d12 = 0.5 * (d12_mm + d21_pp);
    r.d12_real_part = d12_mm.real();
    const double product = d11 * d22;
    r.delta_tilde = product - std::norm(r.d12);
    r.dissipatively_entangling = r.delta_tilde < 0.0;
    if (with_h) {
        r.h12 = h12_mm + h21_pp;
        r.delta = product - std::norm(r.d12 + cd(0.0, 1.0) * r.h12);
        r.entangling = r.delta < 0.0;
    } else {
        r.h12 = cd(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
        r.delta = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

}  // namespace

WitnessReport witness(const BathSpectrum& bath, const SystemConfig& sys, const WitnessOptions& opts) {
    bath.validate();
    sys.validate();
    const auto& fq = opts.coefficients.frequency;
    const double d11 = dissipative_entry_frequency_domain(bath, sys, 1, 1, Sign::Minus, Sign::Minus, fq).real();
    const double d22 = dissipative_entry_frequency_domain(bath, sys, 2, 2, Sign::Plus, Sign::Plus, fq).real();
    const cd d12 = dissipative_entry_frequency_domain(bath, sys, 1, 2, Sign::Minus, Sign::Minus, fq);
    const cd d21 = dissipative_entry_frequency_domain(bath, sys, 2, 1, Sign::Plus, Sign::Plus, fq);
    cd h12{}, h21{};
    if (opts.include_hamiltonian) {
        const TimeDomainKernel kernel = TimeDomainKernel::from_bath(bath);
        const auto& tq = opts.coefficients.time;
        h12 = hamiltonian_entry(kernel, sys, 1, 2, Sign::Minus, Sign::Minus, tq);
        h21 = hamiltonian_entry(kernel, sys, 2, 1, Sign::Plus, Sign::Plus, tq);
    }
    WitnessReport r = assemble(d11, d22, d12, d21, h12, h21, opts.include_hamiltonian);

    const double scale = std::max(std::abs(d11), std::abs(d22));
    if (d11 < -opts.tolerance * scale || d22 < -opts.tolerance * scale) {
        throw ConsistencyError("witness: negative diagonal dissipative coefficient");
    }
    return r;
}

WitnessReport witness_from_coefficients(const CoefficientSet& set) {
    return assemble(set.D(1, 1)(Sign::Minus, Sign::Minus).real(), set.D(2, 2)(Sign::Plus, Sign::Plus).real(),
                    set.D(1, 2)(Sign::Minus, Sign::Minus), set.D(2, 1)(Sign::Plus, Sign::Plus),
                    set.H(1, 2)(Sign::Minus, Sign::Minus), set.H(2, 1)(Sign::Plus, Sign::Plus), true);
}

OrthogonalityResiduals orthogonality_residuals(const WitnessReport& report, const SystemConfig& sys) {
    const cd rot = std::exp(cd(0.0, -(sys.omega2 - sys.omega1) * sys.delta_t / 2.0));
    OrthogonalityResiduals o;
    o.d12_residue = std::abs((rot * report.d12).imag());
    o.h12_residue = std::abs((rot * report.h12).imag());
    o.additivity_residue =
        std::abs(std::norm(report.d12 + cd(0.0, 1.0) * report.h12) - std::norm(report.d12) - std::norm(report.h12));
    o.scale = std::abs(report.d12) + std::abs(report.h12);
    return o;
}

OrthogonalityResiduals orthogonality_check(const BathSpectrum& bath, const SystemConfig& sys,
                                           const WitnessOptions& opts) {
    WitnessOptions o = opts;
    o.include_hamiltonian = true;
    const WitnessReport r = witness(bath, sys, o);
    const OrthogonalityResiduals res = orthogonality_residuals(r, sys);
    const double sq = std::norm(r.d12) + std::norm(r.h12);
    if (res.d12_residue > opts.tolerance * res.scale || res.h12_residue > opts.tolerance * res.scale ||
        res.additivity_residue > opts.tolerance * sq) {
        std::ostringstream msg;
        msg << "orthogonality check failed: residues " << res.d12_residue << ", " << res.h12_residue << ", "
            << res.additivity_residue << " at scale " << res.scale;
        throw ConsistencyError(msg.str());
    }
    return res;
}

double weak_coupling_limit_diag(const BathSpectrum& bath, double omega, Sign epsilon) {
    bath.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("weak_coupling_limit_diag: omega must be positive");
    const double e = sign_value(epsilon);
    return 4.0 * pi * e * omega * std::exp(-omega / bath.omega_c) / std::expm1(e * bath.beta * omega);
}

double weak_coupling_limit_offdiag(const BathSpectrum& bath, double omega1, double omega2) {
    bath.validate();
    if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw DomainError("weak_coupling_limit_offdiag: frequencies must be positive");
    if (omega1 != omega2) return 0.0;
    return 2.0 * pi * std::exp(-omega2 / bath.omega_c) * omega_coth(bath.beta, omega2);
}

double high_temp_d12_approx(const BathSpectrum& bath, const SystemConfig& sys) {
    double sum = 0.0;
    for (double w : {sys.omega1, sys.omega2}) sum += std::exp(-w / bath.omega_c) * omega_coth(bath.beta, w);
    return pi * sinc(sys.delta_omega() * sys.delta_t) * sum;
}

double high_temp_delta_tilde_approx(const BathSpectrum& bath, const SystemConfig& sys) {
    const double dw = sys.delta_omega();
    const double s = sinc(dw * sys.delta_t);
    return 16.0 * pi * pi / (bath.beta * bath.beta) * (1.0 - bath.beta * dw - s * s);
}

double high_temp_delta_tilde_small_argument(const BathSpectrum& bath, const SystemConfig& sys) {
    const double dw = sys.delta_omega();
    const double dt = sys.delta_t;
    return -16.0 * pi * pi / (bath.beta * bath.beta) * (bath.beta * dw - dw * dw * dt * dt / 3.0);
}

double negativity_threshold(double delta_omega, double delta_t) {
    if (!(delta_omega >= 0.0) || !(delta_t > 0.0)) {
        throw DomainError("negativity_threshold: needs delta_omega >= 0 and delta_t > 0");
    }
    return delta_omega * delta_t * delta_t / 3.0;
}

}  // namespace cgbath
