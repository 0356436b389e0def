#pragma once

// Coefficients of the finite coarse-graining-time generator for two qubits
// coupled through sigma_1 to one Ohmic bath.
//
// For qubits a, b and signs e, e' in {+1, -1}:
//
//   D^{ab}_{ee'} = N/dt int_0^dt int_0^dt e^{i(e w_a t1 - e' w_b t2)} G(t2 - t1)
//   H^{ab}_{ee'} = -i N/(2 dt) int_0^dt int_0^dt e^{i(e w_a t1 - e' w_b t2)}
//                                sign(t2 - t1) G(t2 - t1)
//
// with N = kCoefficientNormalization. Inserting G(t) = int g(w) e^{-iwt} dw
// gives the one-dimensional frequency form
//
//   D^{ab}_{ee'} = N dt e^{i(e w_a - e' w_b) dt/2}
//                  int g(w) sinc((w + e w_a) dt/2) sinc((w + e' w_b) dt/2) dw.
//
// Basis conventions used throughout the library:
//   * sign index 0 is e = +1, index 1 is e = -1;
//   * Pauli index i in {1, 2} is sigma_1, sigma_2;
//   * Kossakowski index (a, i) maps to 2 (a - 1) + (i - 1);
//   * two-qubit basis (|uu>, |ud>, |du>, |dd>) with sigma_3 |u> = +|u>,
//     qubit 1 is the left tensor factor.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>

#include "cgbath/bath.hpp"
#include "cgbath/quadrature.hpp"

namespace cgbath {

/// Overall factor on the double-integral definitions. With N = 2 the
/// coefficients converge to 4 pi g(w_a) on the diagonal and the off-diagonal
/// combination to 2 pi w coth(beta w/2) e^{-w/wc} as dt -> inf.
inline constexpr double kCoefficientNormalization = 2.0;

struct SystemConfig {
    double omega1 = 1.0;
    double omega2 = 1.0;
    double delta_t = 1.0;
    double lambda = 0.0;

    /// Throws DomainError unless omega1, omega2, delta_t > 0 and lambda >= 0 (all finite).
    void validate() const;

    double delta_omega() const noexcept { return 0.5 * (omega2 - omega1); }
    double omega(int qubit) const { return qubit == 1 ? omega1 : omega2; }

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

enum class Sign : int { Plus = +1, Minus = -1 };

constexpr double sign_value(Sign s) noexcept { return s == Sign::Plus ? 1.0 : -1.0; }
constexpr int sign_index(Sign s) noexcept { return s == Sign::Plus ? 0 : 1; }
inline constexpr std::array<Sign, 2> kSigns = {Sign::Plus, Sign::Minus};

enum class BlockKind { Dissipative, Hamiltonian };

struct CoefficientBlock {
    Eigen::Matrix2cd entries = Eigen::Matrix2cd::Zero();
    BlockKind kind = BlockKind::Dissipative;
    int a = 1;
    int b = 1;

    cd operator()(Sign e, Sign ep) const { return entries(sign_index(e), sign_index(ep)); }
    cd& operator()(Sign e, Sign ep) { return entries(sign_index(e), sign_index(ep)); }
};

struct KossakowskiMatrix {
    Eigen::Matrix4cd entries = Eigen::Matrix4cd::Zero();
    /// Smallest eigenvalue before clamping.
    double min_eigenvalue = 0.0;
    /// Largest eigenvalue (after clamping).
    double max_eigenvalue = 0.0;

    static constexpr int index(int qubit, int pauli) noexcept { return 2 * (qubit - 1) + (pauli - 1); }
};

struct LambShiftInteraction {
    /// h_{ij}: coefficient of sigma_i^{(1)} sigma_j^{(2)}.
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    double imag_residue = 0.0;
};

/// Correlation function used by the time-domain integrals. `feature_scale` is
/// the width of its peak at t = 0 (0 when it has none).
struct TimeDomainKernel {
    std::function<cd(double)> correlation;
    double feature_scale = 0.0;

    static TimeDomainKernel from_bath(const BathSpectrum& bath);
    static TimeDomainKernel constant(cd value);
};

struct CoefficientOptions {
    quad::QuadratureConfig frequency{1e-11, 1e-300, 400000};
    quad::QuadratureConfig time{1e-10, 1e-300, 2000000};
    /// Relative tolerance for Hermiticity (of C) and reality (of h) checks.
    double hermiticity_tol = 1e-10;
    /// Relative tolerance on negative eigenvalues of C.
    double positivity_tol = 1e-8;
    double reality_tol = 1e-8;
};

// -- dissipative blocks ------------------------------------------------------

cd dissipative_entry_time_domain(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b,
                                 Sign e, Sign ep, const quad::QuadratureConfig& cfg);
cd dissipative_entry_frequency_domain(const BathSpectrum& bath, const SystemConfig& sys, int a, int b,
                                      Sign e, Sign ep, const quad::QuadratureConfig& cfg);

/// Reference path: 2-D quadrature of the double-integral definition.
CoefficientBlock dissipative_block_time_domain(const TimeDomainKernel& kernel, const SystemConfig& sys, int a,
                                               int b, const CoefficientOptions& opts = {});
CoefficientBlock dissipative_block_time_domain(const BathSpectrum& bath, const SystemConfig& sys, int a, int b,
                                               const CoefficientOptions& opts = {});

/// Production path: one frequency integral per entry. The core window around
/// the sinc peaks is integrated directly; beyond it the sinc product splits
/// into a smooth part and two pure phases whose contours are rotated into the
/// complex plane.
CoefficientBlock dissipative_block_frequency_domain(const BathSpectrum& bath, const SystemConfig& sys, int a,
                                                    int b, const CoefficientOptions& opts = {});

// -- hamiltonian blocks ------------------------------------------------------

/// Reduced to one time integral: since the kernel depends on t2 - t1 only, the
/// integral along the diagonal direction is done in closed form.
cd hamiltonian_entry(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b, Sign e, Sign ep,
                     const quad::QuadratureConfig& cfg);
/// Reference: 2-D quadrature of the double integral, split along t1 = t2.
cd hamiltonian_entry_2d(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b, Sign e, Sign ep,
                        const quad::QuadratureConfig& cfg);
CoefficientBlock hamiltonian_block(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b,
                                   const CoefficientOptions& opts = {});
CoefficientBlock hamiltonian_block(const BathSpectrum& bath, const SystemConfig& sys, int a, int b,
                                   const CoefficientOptions& opts = {});

// -- assembly ----------------------------------------------------------------

/// Psi with rows e = +, - and columns j = 1, 2: (1/2) [[1, i], [1, -i]].
const Eigen::Matrix2cd& psi_matrix();

/// Psi^dagger M Psi.
Eigen::Matrix2cd psi_transform(const Eigen::Matrix2cd& m);
Eigen::Matrix2cd psi_transform(const CoefficientBlock& block);

enum class DissipativePath { Frequency, Time };

/// All eight blocks for one (bath, system) pair. lambda is ignored.
struct CoefficientSet {
    BathSpectrum bath;
    SystemConfig sys;
    std::array<CoefficientBlock, 4> dissipative;
    std::array<CoefficientBlock, 4> hamiltonian;

    const CoefficientBlock& D(int a, int b) const { return dissipative[2 * (a - 1) + (b - 1)]; }
    const CoefficientBlock& H(int a, int b) const { return hamiltonian[2 * (a - 1) + (b - 1)]; }
};

CoefficientSet compute_coefficients(const BathSpectrum& bath, const SystemConfig& sys,
                                    DissipativePath path = DissipativePath::Frequency,
                                    const CoefficientOptions& opts = {});

/// Assemble lambda^2 [Psi^dagger D^{ab} Psi]_{ab}, check Hermiticity and
/// positivity, clamp eigenvalues in [-tol ||C||, 0) to zero. Throws
/// ConsistencyError otherwise.
KossakowskiMatrix kossakowski_from_blocks(const std::array<CoefficientBlock, 4>& dissipative, double lambda,
                                          const CoefficientOptions& opts = {});
KossakowskiMatrix kossakowski(const BathSpectrum& bath, const SystemConfig& sys,
                              const CoefficientOptions& opts = {});

/// h = Psi^dagger H^{12} Psi + (Psi^dagger H^{21} Psi)^T, validated real. Does
/// not include lambda^2.
LambShiftInteraction lamb_shift_from_blocks(const CoefficientBlock& h12, const CoefficientBlock& h21,
                                            const CoefficientOptions& opts = {});
LambShiftInteraction lamb_shift_interaction(const TimeDomainKernel& kernel, const SystemConfig& sys,
                                            const CoefficientOptions& opts = {});
LambShiftInteraction lamb_shift_interaction(const BathSpectrum& bath, const SystemConfig& sys,
                                            const CoefficientOptions& opts = {});

/// Memoizes CoefficientSet per (bath, omega1, omega2, delta_t, path). Safe for
/// concurrent use; a miss computes outside the lock, so two threads may race to
/// fill the same key, and the first insertion wins.
class CoefficientCache {
public:
    explicit CoefficientCache(CoefficientOptions opts = {}) : opts_(opts) {}

    std::shared_ptr<const CoefficientSet> get(const BathSpectrum& bath, const SystemConfig& sys,
                                              DissipativePath path = DissipativePath::Frequency);
    std::size_t size() const;

private:
    using Key = std::tuple<double, double, double, double, double, int>;
    CoefficientOptions opts_;
    mutable std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const CoefficientSet>> entries_;
};

}  // namespace cgbath
