#pragma once

// Small-time entanglement witnesses for the initial state |d> (x) |u>.
//
//   delta       = D^{11}_{--} D^{22}_{++} - |Dc + i Hc|^2
//   delta_tilde = D^{11}_{--} D^{22}_{++} - |Dc|^2
//
// with Dc = (D^{12}_{--} + D^{21}_{++}) / 2 and Hc = H^{12}_{--} + H^{21}_{++}.
// delta < 0 is sufficient for the bath to entangle the two qubits at small
// times; delta_tilde < 0 is the purely dissipative version.

#include "cgbath/bath.hpp"
#include "cgbath/coefficients.hpp"

namespace cgbath {

struct WitnessOptions {
    /// Relative tolerance for the derived consistency checks.
    double tolerance = 1e-6;
    /// Skip the time-domain Hamiltonian integrals; delta is then reported as NaN.
    bool include_hamiltonian = true;
    CoefficientOptions coefficients{};
};

struct WitnessReport {
    double d11_mm = 0.0;
    double d22_pp = 0.0;
    cd d12{};
    cd h12{};
    double delta = 0.0;
    double delta_tilde = 0.0;
    bool entangling = false;
    bool dissipatively_entangling = false;
    /// (D^{12}_{--} + conj(D^{12}_{--})) / 2, i.e. Re D^{12}_{--}, for comparison.
    double d12_real_part = 0.0;
};

WitnessReport witness(const BathSpectrum& bath, const SystemConfig& sys, const WitnessOptions& opts = {});

/// Build the report from precomputed blocks.
WitnessReport witness_from_coefficients(const CoefficientSet& set);

struct OrthogonalityResiduals {
    /// |Im(e^{-i (w2 - w1) dt / 2} Dc)|
    double d12_residue = 0.0;
    /// |Im(e^{-i (w2 - w1) dt / 2} Hc)|
    double h12_residue = 0.0;
    /// | |Dc + i Hc|^2 - |Dc|^2 - |Hc|^2 |
    double additivity_residue = 0.0;
    double scale = 0.0;  ///< |Dc| + |Hc|
};

/// Residues of the rotated off-diagonal quantities. Throws ConsistencyError if
/// either exceeds tolerance * (|Dc| + |Hc|) or the additivity residue exceeds
/// tolerance * (|Dc|^2 + |Hc|^2).
OrthogonalityResiduals orthogonality_check(const BathSpectrum& bath, const SystemConfig& sys,
                                           const WitnessOptions& opts = {});
OrthogonalityResiduals orthogonality_residuals(const WitnessReport& report, const SystemConfig& sys);

/// dt -> inf limit of D^{aa}_{ee}: 4 pi e w e^{-w/wc} / (e^{e beta w} - 1).
double weak_coupling_limit_diag(const BathSpectrum& bath, double omega, Sign epsilon);

/// dt -> inf limit of |Dc|: zero unless omega1 == omega2 exactly, then
/// 2 pi w e^{-w/wc} coth(beta w / 2).
double weak_coupling_limit_offdiag(const BathSpectrum& bath, double omega1, double omega2);

/// High-temperature form |Dc| ~ pi sinc(dw dt) sum_a w_a e^{-w_a/wc} coth(beta w_a/2).
double high_temp_d12_approx(const BathSpectrum& bath, const SystemConfig& sys);

/// High-temperature form delta_tilde ~ (16 pi^2 / beta^2)(1 - beta dw - sinc^2(dw dt)).
double high_temp_delta_tilde_approx(const BathSpectrum& bath, const SystemConfig& sys);

/// Small dw dt expansion: -(16 pi^2 / beta^2)(beta dw - dw^2 dt^2 / 3).
double high_temp_delta_tilde_small_argument(const BathSpectrum& bath, const SystemConfig& sys);

/// beta_min = dw dt^2 / 3; the approximate window is beta_min < beta << 1/w.
double negativity_threshold(double delta_omega, double delta_t);

}  // namespace cgbath
