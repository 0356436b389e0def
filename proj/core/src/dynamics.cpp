#include "cgbath/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cgbath/errors.hpp"

namespace cgbath {

namespace {

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Matrix16cd kron(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
    Matrix16cd out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return out;
}

Eigen::Vector4d eigenvalues(const Eigen::Matrix4cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Eigen::Matrix4cd hermitize(const Eigen::Matrix4cd& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DensityCheck DensityMatrix::check() const {
    DensityCheck c;
    c.hermiticity_residue = (entries - entries.adjoint()).norm();
    c.trace_residual = entries.trace().real() - 1.0;
    c.min_eigenvalue = eigenvalues(entries).minCoeff();
    return c;
}

void DensityMatrix::validate(const DensityTolerances& tol) const {
    if (!entries.allFinite()) throw DomainError("density matrix has non-finite entries");
    const DensityCheck c = check();
    std::ostringstream msg;
    if (c.hermiticity_residue > tol.hermiticity) {
        msg << "density matrix not Hermitian: residue " << c.hermiticity_residue;
    } else if (std::abs(c.trace_residual) > tol.trace || std::abs(entries.trace().imag()) > tol.trace) {
        msg << "density matrix trace off by " << c.trace_residual;
    } else if (c.min_eigenvalue < -tol.positivity) {
        msg << "density matrix not positive: min eigenvalue " << c.min_eigenvalue;
    } else {
        return;
    }
    throw DomainError(msg.str());
}

const Eigen::Matrix2cd& pauli(int i) {
    static const std::array<Eigen::Matrix2cd, 4> s = [] {
        std::array<Eigen::Matrix2cd, 4> m;
        const cd I(0.0, 1.0);
        m[0] << 1.0, 0.0, 0.0, 1.0;
        m[1] << 0.0, 1.0, 1.0, 0.0;
        m[2] << 0.0, -I, I, 0.0;
        m[3] << 1.0, 0.0, 0.0, -1.0;
        return m;
    }();
    if (i < 0 || i > 3) throw DomainError("pauli index must be 0..3");
    return s[static_cast<std::size_t>(i)];
}

Eigen::Matrix4cd on_qubit(int qubit, const Eigen::Matrix2cd& op) {
    if (qubit == 1) return kron(op, pauli(0));
    if (qubit == 2) return kron(pauli(0), op);
    throw DomainError("qubit index must be 1 or 2");
}

Eigen::Matrix4cd system_hamiltonian(const SystemConfig& sys) {
    return 0.5 * sys.omega1 * on_qubit(1, pauli(3)) + 0.5 * sys.omega2 * on_qubit(2, pauli(3));
}

Vector16cd vectorize(const Eigen::Matrix4cd& rho) { return Eigen::Map<const Vector16cd>(rho.data()); }

Eigen::Matrix4cd unvectorize(const Vector16cd& v) { return Eigen::Map<const Eigen::Matrix4cd>(v.data()); }

Matrix16cd lindblad_superoperator(const Eigen::Matrix4cd& hamiltonian, const std::vector<Eigen::Matrix4cd>& ops,
                                  const Eigen::MatrixXcd& coefficients) {
    const auto n = static_cast<Eigen::Index>(ops.size());
    if (coefficients.rows() != n || coefficients.cols() != n) {
        throw DomainError("lindblad_superoperator: coefficient matrix does not match operator count");
    }
    const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    const cd I(0.0, 1.0);
    Matrix16cd L = -I * (kron(id, hamiltonian) - kron(hamiltonian.transpose().eval(), id));
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            const cd c = coefficients(k, l);
            if (c == cd(0.0)) continue;
            const Eigen::Matrix4cd& A = ops[static_cast<std::size_t>(k)];
            const Eigen::Matrix4cd& B = ops[static_cast<std::size_t>(l)];
            const Eigen::Matrix4cd BA = B * A;
            L += c * (kron(B.transpose().eval(), A) - 0.5 * kron(id, BA) - 0.5 * kron(BA.transpose().eval(), id));
        }
    }
    return L;
}

Liouvillian build_generator(const CoefficientSet& set, const SystemConfig& sys, const GeneratorOptions& opts) {
    sys.validate();
    Liouvillian out;
    out.bath = set.bath;
    out.sys = sys;
    out.include_single_qubit_shift = opts.include_single_qubit_shift;
    const double l2 = sys.lambda * sys.lambda;

    out.kossakowski = kossakowski_from_blocks(set.dissipative, sys.lambda, opts.coefficients);
    out.interaction = lamb_shift_from_blocks(set.H(1, 2), set.H(2, 1), opts.coefficients);

    Eigen::Matrix4cd correction = Eigen::Matrix4cd::Zero();
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            correction += out.interaction.h(i - 1, j - 1) * on_qubit(1, pauli(i)) * on_qubit(2, pauli(j));
    if (opts.include_single_qubit_shift) {
        for (int a = 1; a <= 2; ++a) {
            const Eigen::Matrix2cd k = psi_transform(set.H(a, a));
            for (int i = 1; i <= 2; ++i)
                for (int j = 1; j <= 2; ++j)
                    correction += k(i - 1, j - 1) * on_qubit(a, pauli(i)) * on_qubit(a, pauli(j));
        }
    }
    out.hamiltonian_correction = l2 * hermitize(correction);

    std::vector<Eigen::Matrix4cd> ops;
    for (int a = 1; a <= 2; ++a)
        for (int i = 1; i <= 2; ++i) ops.push_back(on_qubit(a, pauli(i)));
    out.matrix = lindblad_superoperator(system_hamiltonian(sys) + out.hamiltonian_correction, ops,
                                        out.kossakowski.entries);

    out.trace_residue = (vectorize(Eigen::Matrix4cd::Identity()).adjoint() * out.matrix).norm();
    const double scale = std::max(1.0, out.matrix.norm());
    if (out.trace_residue > opts.trace_tol * scale) {
        std::ostringstream msg;
        msg << "generator is not trace preserving: residue " << out.trace_residue;
        throw ConsistencyError(msg.str());
    }
    return out;
}

Liouvillian build_generator(const BathSpectrum& bath, const SystemConfig& sys, const GeneratorOptions& opts) {
    bath.validate();
    sys.validate();
    CoefficientSet set{bath, sys, {}, {}};
    if (sys.lambda > 0.0) {
        set = compute_coefficients(bath, sys, DissipativePath::Frequency, opts.coefficients);
    } else {
        for (int k = 0; k < 4; ++k) {
            const int a = k / 2 + 1, b = k % 2 + 1;
            set.dissipative[static_cast<std::size_t>(k)] = {Eigen::Matrix2cd::Zero(), BlockKind::Dissipative, a, b};
            set.hamiltonian[static_cast<std::size_t>(k)] = {Eigen::Matrix2cd::Zero(), BlockKind::Hamiltonian, a, b};
        }
    }
    return build_generator(set, sys, opts);
}

DensityMatrix propagate(const Matrix16cd& generator, const DensityMatrix& rho0, double t) {
    const Matrix16cd step = (generator * t).exp();
    return {unvectorize(step * vectorize(rho0.entries))};
}

Trajectory evolve(const Matrix16cd& generator, const DensityMatrix& rho0, double t_final, std::size_t n_steps,
                  const DensityTolerances& tol) {
    if (n_steps < 1) throw DomainError("evolve: n_steps must be at least 1");
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw DomainError("evolve: t_final must be positive");
    if (!generator.allFinite()) throw DomainError("evolve: generator has non-finite entries");
    rho0.validate(tol);

    const double h = t_final / static_cast<double>(n_steps);
    const Matrix16cd step = (generator * h).exp();

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.concurrence.reserve(n_steps + 1);
    traj.checks.reserve(n_steps + 1);

    DensityMatrix rho{hermitize(rho0.entries)};
    DensityCheck c0 = rho0.check();
    traj.times.push_back(0.0);
    traj.states.push_back(rho);
    traj.checks.push_back(c0);
    traj.concurrence.push_back(concurrence(rho));

    for (std::size_t k = 1; k <= n_steps; ++k) {
        const Eigen::Matrix4cd raw = unvectorize(step * vectorize(rho.entries));
        DensityCheck c;
        c.hermiticity_residue = (raw - raw.adjoint()).norm();
        rho.entries = hermitize(raw);
        c.trace_residual = rho.entries.trace().real() - 1.0;
        c.min_eigenvalue = eigenvalues(rho.entries).minCoeff();

        std::ostringstream msg;
        if (!raw.allFinite()) {
            msg << "non-finite state";
        } else if (c.hermiticity_residue > tol.hermiticity) {
            msg << "Hermiticity residue " << c.hermiticity_residue;
        } else if (std::abs(c.trace_residual) > tol.trace) {
            msg << "trace drift " << c.trace_residual;
        } else if (c.min_eigenvalue < -tol.positivity) {
            msg << "min eigenvalue " << c.min_eigenvalue;
        }
        if (!msg.str().empty()) throw IntegrationError("evolve: step " + std::to_string(k) + ": " + msg.str(), k);

        traj.times.push_back(static_cast<double>(k) * h);
        traj.states.push_back(rho);
        traj.checks.push_back(c);
        traj.concurrence.push_back(concurrence(rho));
    }
    return traj;
}

Trajectory evolve(const Liouvillian& generator, const DensityMatrix& rho0, double t_final, std::size_t n_steps,
                  const DensityTolerances& tol) {
    return evolve(generator.matrix, rho0, t_final, n_steps, tol);
}

double concurrence(const DensityMatrix& rho) {
    const Eigen::Matrix4cd r = hermitize(rho.entries);
    const Eigen::Matrix4cd yy = kron(pauli(2), pauli(2));
    const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r);
    const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd sq = es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();

    Eigen::Vector4d mu = eigenvalues(sq * tilde * sq).cwiseMax(0.0).cwiseSqrt();
    std::sort(mu.data(), mu.data() + 4, std::greater<>());
    const double c = mu(0) - mu(1) - mu(2) - mu(3);
    return std::clamp(c, 0.0, 1.0);
}

DensityMatrix initial_state_down_up() {
    DensityMatrix rho;
    rho.entries(2, 2) = 1.0;
    return rho;
}

Matrix16cd choi_matrix(const Matrix16cd& generator, double t) {
    const Matrix16cd phi = (generator * t).exp();
    Matrix16cd choi;
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            const Eigen::Matrix4cd out = unvectorize(phi.col(k + 4 * l));
            choi.block<4, 4>(4 * k, 4 * l) = out;
        }
    }
    return choi;
}

double choi_min_eigenvalue(const Matrix16cd& generator, double t) {
    const Matrix16cd c = choi_matrix(generator, t);
    Eigen::SelfAdjointEigenSolver<Matrix16cd> es(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

OnsetResult entanglement_onset(const Liouvillian& generator, const OnsetOptions& opts) {
    if (opts.n_steps < 100) throw DomainError("entanglement_onset: needs at least 100 steps");
    if (!(opts.horizon_fraction > 0.0)) throw DomainError("entanglement_onset: horizon_fraction must be positive");
    const double scale = generator.kossakowski.max_eigenvalue;
    if (!(scale > 0.0)) throw DomainError("entanglement_onset: generator has no dissipative part");

    OnsetResult r;
    r.t_final = opts.horizon_fraction / scale;
    r.n_steps = opts.n_steps;
    const Trajectory traj = evolve(generator, initial_state_down_up(), r.t_final, opts.n_steps);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.concurrence[k] > r.max_concurrence) {
            r.max_concurrence = traj.concurrence[k];
            r.time_of_max = traj.times[k];
        }
    }
    return r;
}

OnsetResult entanglement_onset(const BathSpectrum& bath, const SystemConfig& sys, const OnsetOptions& opts) {
    return entanglement_onset(build_generator(bath, sys, opts.generator), opts);
}

}  // namespace cgbath
