#pragma once

// Two-qubit master equation
//
//   d rho/dt = -i [H_S + lambda^2 H_int, rho]
//              + sum_{a,b,i,j} C^{(ab)}_{ij} (s_i^a rho s_j^b - {s_j^b s_i^a, rho}/2)
//
// with H_S = (w1/2) s3 x 1 + (w2/2) 1 x s3 and s_i^a the Pauli matrix i in {1, 2}
// acting on qubit a. C already carries the factor lambda^2. The superoperator
// acts on column-stacked density matrices: vec(A rho B) = (B^T x A) vec(rho).

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "cgbath/bath.hpp"
#include "cgbath/coefficients.hpp"

namespace cgbath {

using Matrix16cd = Eigen::Matrix<cd, 16, 16>;
using Vector16cd = Eigen::Matrix<cd, 16, 1>;

struct DensityTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-9;
    double positivity = 1e-8;
};

struct DensityCheck {
    double hermiticity_residue = 0.0;  ///< ||rho - rho^dag||
    double trace_residual = 0.0;       ///< Tr rho - 1
    double min_eigenvalue = 0.0;
};

struct DensityMatrix {
    Eigen::Matrix4cd entries = Eigen::Matrix4cd::Zero();

    DensityCheck check() const;
    /// Throws DomainError if any tolerance is exceeded.
    void validate(const DensityTolerances& tol = {}) const;
};

// Operators on C^2 x C^2, basis (|uu>, |ud>, |du>, |dd>).
const Eigen::Matrix2cd& pauli(int i);  ///< i in {0 (identity), 1, 2, 3}
Eigen::Matrix4cd on_qubit(int qubit, const Eigen::Matrix2cd& op);
Eigen::Matrix4cd system_hamiltonian(const SystemConfig& sys);

struct Liouvillian {
    Matrix16cd matrix = Matrix16cd::Zero();
    BathSpectrum bath{};
    SystemConfig sys{};
    bool include_single_qubit_shift = false;
    KossakowskiMatrix kossakowski{};
    LambShiftInteraction interaction{};
    /// Hermitian part added to H_S (lambda^2 times Lamb-shift terms).
    Eigen::Matrix4cd hamiltonian_correction = Eigen::Matrix4cd::Zero();
    /// || vec(1)^dag L ||.
    double trace_residue = 0.0;
};

struct GeneratorOptions {
    bool include_single_qubit_shift = false;
    CoefficientOptions coefficients{};
    /// Relative bound on trace_residue (against max(1, ||L||)).
    double trace_tol = 1e-10;
};

Liouvillian build_generator(const BathSpectrum& bath, const SystemConfig& sys, const GeneratorOptions& opts = {});

/// Assemble from precomputed blocks (lambda taken from sys).
Liouvillian build_generator(const CoefficientSet& set, const SystemConfig& sys, const GeneratorOptions& opts = {});

/// Superoperator of rho -> -i[H, rho] + sum C_{kl} (A_k rho A_l - {A_l A_k, rho}/2)
/// for an arbitrary operator list A and coefficient matrix C.
Matrix16cd lindblad_superoperator(const Eigen::Matrix4cd& hamiltonian, const std::vector<Eigen::Matrix4cd>& ops,
                                  const Eigen::MatrixXcd& coefficients);

Vector16cd vectorize(const Eigen::Matrix4cd& rho);
Eigen::Matrix4cd unvectorize(const Vector16cd& v);

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<double> concurrence;
    std::vector<DensityCheck> checks;  ///< before Hermitization for the Hermiticity residue
};

/// States at t_k = k t_final / n_steps, k = 0..n_steps, by repeated application
/// of exp(L t_final / n_steps). Each new state is checked for Hermiticity,
/// symmetrized, then checked for trace and positivity. Throws IntegrationError.
Trajectory evolve(const Matrix16cd& generator, const DensityMatrix& rho0, double t_final, std::size_t n_steps,
                  const DensityTolerances& tol = {});
Trajectory evolve(const Liouvillian& generator, const DensityMatrix& rho0, double t_final, std::size_t n_steps,
                  const DensityTolerances& tol = {});

/// Single state exp(L t) rho0.
DensityMatrix propagate(const Matrix16cd& generator, const DensityMatrix& rho0, double t);

/// Wootters concurrence, in [0, 1].
double concurrence(const DensityMatrix& rho);

/// |d> x |u>.
DensityMatrix initial_state_down_up();

/// Choi matrix sum_{kl} |k><l| x Phi(|k><l|) of Phi = exp(L t).
Matrix16cd choi_matrix(const Matrix16cd& generator, double t);
double choi_min_eigenvalue(const Matrix16cd& generator, double t);

struct OnsetResult {
    double max_concurrence = 0.0;
    double time_of_max = 0.0;
    double t_final = 0.0;
    std::size_t n_steps = 0;
};

struct OnsetOptions {
    std::size_t n_steps = 200;
    /// Horizon as a fraction of 1 / (largest eigenvalue of C).
    double horizon_fraction = 0.1;
    GeneratorOptions generator{};
};

/// Maximum concurrence reached from |d> x |u> within the small-time horizon.
OnsetResult entanglement_onset(const BathSpectrum& bath, const SystemConfig& sys, const OnsetOptions& opts = {});
OnsetResult entanglement_onset(const Liouvillian& generator, const OnsetOptions& opts = {});

}  // namespace cgbath
