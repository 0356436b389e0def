#include "cgbath/coefficients.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include "cgbath/errors.hpp"
#include "cgbath/math.hpp"

namespace cgbath {

using std::numbers::pi;

void SystemConfig::validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(omega1)) throw DomainError("omega1 must be finite and positive");
    if (!positive(omega2)) throw DomainError("omega2 must be finite and positive");
    if (!positive(delta_t)) throw DomainError("delta_t must be finite and positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and non-negative");
}

TimeDomainKernel TimeDomainKernel::from_bath(const BathSpectrum& bath) {
    bath.validate();
    return {[bath](double t) { return correlation_closed_form(bath, t); },
            std::min(bath.correlation_time(), bath.beta)};
}

TimeDomainKernel TimeDomainKernel::constant(cd value) {
    return {[value](double) { return value; }, 0.0};
}

namespace {

void check_qubits(int a, int b) {
    if ((a != 1 && a != 2) || (b != 1 && b != 2)) throw DomainError("qubit index must be 1 or 2");
}

quad::SquareOptions square_options(const TimeDomainKernel& kernel, double alpha, double gamma) {
    quad::SquareOptions o;
    o.diagonal_split = true;
    o.diagonal_feature_scale = kernel.feature_scale;
    o.oscillation_scale = std::max(std::abs(alpha), std::abs(gamma));
    return o;
}

}  // namespace

cd dissipative_entry_time_domain(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b, Sign e,
                                 Sign ep, const quad::QuadratureConfig& cfg) {
    sys.validate();
    check_qubits(a, b);
    const double alpha = sign_value(e) * sys.omega(a);
    const double gamma = sign_value(ep) * sys.omega(b);
    quad::Kernel2d f = [&](double t1, double t2) {
        return std::exp(cd(0.0, alpha * t1 - gamma * t2)) * kernel.correlation(t2 - t1);
    };
    const auto r = quad::integrate_square_2d(f, sys.delta_t, cfg, square_options(kernel, alpha, gamma));
    return kCoefficientNormalization / sys.delta_t * r.value;
}

namespace {

// int_W^inf h(w) sinc((w + p) T) sinc((w + q) T) dw, h analytic for Re w >= W.
cd sinc_product_tail(const std::function<cd(cd)>& h, double W, double p, double q, double T, double length,
                     const quad::QuadratureConfig& cfg) {
    auto ratio = [&](cd w) { return h(w) / ((w + p) * (w + q)); };
    const double T2 = T * T;
    // Tolerances apply to each piece's contribution, not to the raw integrals.
    quad::QuadratureConfig smooth_cfg = cfg, phase_cfg = cfg;
    smooth_cfg.abs_tol = cfg.abs_tol * 2.0 * T2;
    phase_cfg.abs_tol = cfg.abs_tol * 4.0 * T2;
    quad::RealIntegrand smooth = [&](double u) { return cd(ratio(cd(W + u, 0.0)).real(), 0.0); };
    const double S =
        quad::integrate_semi_infinite(smooth, smooth_cfg, 0.0, quad::Range::HalfLine, length).value.real();
    const cd up = quad::integrate_fourier_tail(ratio, W, 2.0 * T, phase_cfg).value;
    const cd down = quad::integrate_fourier_tail(ratio, W, -2.0 * T, phase_cfg).value;
    return std::cos((p - q) * T) / (2.0 * T2) * S -
           (std::exp(cd(0.0, (p + q) * T)) * up + std::exp(cd(0.0, -(p + q) * T)) * down) / (4.0 * T2);
}

}  // namespace

cd dissipative_entry_frequency_domain(const BathSpectrum& bath, const SystemConfig& sys, int a, int b, Sign e,
                                      Sign ep, const quad::QuadratureConfig& cfg) {
    bath.validate();
    sys.validate();
    check_qubits(a, b);
    const double p = sign_value(e) * sys.omega(a);
    const double q = sign_value(ep) * sys.omega(b);
    const double T = 0.5 * sys.delta_t;

    // Natural size of the integral: peak density times the sinc^2 area.
    const double peak = std::max(spectral_density(bath, -p), spectral_density(bath, -q));
    quad::QuadratureConfig c = cfg;
    c.abs_tol = std::max(cfg.abs_tol, 0.2 * cfg.rel_tol * peak * pi / T);

    const double W = std::max(std::abs(p), std::abs(q)) + std::max(1.0, 4.0 * pi / T);

    quad::RealIntegrand core = [&](double w) {
        return cd(spectral_density(bath, w) * sinc((w + p) * T) * sinc((w + q) * T), 0.0);
    };
    std::vector<double> breaks;
    const double lobe = pi / T;
    for (double w = -W + lobe; w < W; w += lobe) breaks.push_back(w);
    breaks.push_back(-p);
    breaks.push_back(-q);
    breaks.push_back(0.0);
    std::sort(breaks.begin(), breaks.end());
    const cd core_value = quad::integrate_interval(core, -W, W, c, breaks).value;

    const double length = std::min({W, 1.0 / bath.beta, bath.omega_c});
    auto upper = [&](cd w) { return spectral_density_analytic(bath, w, true); };
    // For w < -W substitute w = -u: g(-u) sinc((u - p) T) sinc((u - q) T).
    auto lower = [&](cd u) { return spectral_density_analytic(bath, -u, false); };
    const cd tail_up = sinc_product_tail(upper, W, p, q, T, length, c);
    const cd tail_down = sinc_product_tail(lower, W, -p, -q, T, length, c);

    const cd integral = core_value + tail_up + tail_down;
    return kCoefficientNormalization * sys.delta_t * std::exp(cd(0.0, (p - q) * T)) * integral;
}

CoefficientBlock dissipative_block_time_domain(const TimeDomainKernel& kernel, const SystemConfig& sys, int a,
                                               int b, const CoefficientOptions& opts) {
    CoefficientBlock blk{Eigen::Matrix2cd::Zero(), BlockKind::Dissipative, a, b};
    for (Sign e : kSigns)
        for (Sign ep : kSigns) blk(e, ep) = dissipative_entry_time_domain(kernel, sys, a, b, e, ep, opts.time);
    return blk;
}

CoefficientBlock dissipative_block_time_domain(const BathSpectrum& bath, const SystemConfig& sys, int a, int b,
                                               const CoefficientOptions& opts) {
    return dissipative_block_time_domain(TimeDomainKernel::from_bath(bath), sys, a, b, opts);
}

CoefficientBlock dissipative_block_frequency_domain(const BathSpectrum& bath, const SystemConfig& sys, int a,
                                                    int b, const CoefficientOptions& opts) {
    CoefficientBlock blk{Eigen::Matrix2cd::Zero(), BlockKind::Dissipative, a, b};
    for (Sign e : kSigns)
        for (Sign ep : kSigns)
            blk(e, ep) = dissipative_entry_frequency_domain(bath, sys, a, b, e, ep, opts.frequency);
    return blk;
}

cd hamiltonian_entry(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b, Sign e, Sign ep,
                     const quad::QuadratureConfig& cfg) {
    sys.validate();
    check_qubits(a, b);
    const double alpha = sign_value(e) * sys.omega(a);
    const double gamma = sign_value(ep) * sys.omega(b);
    const double kappa = alpha - gamma;
    const double dt = sys.delta_t;

    // With t2 = t1 + tau the t1 integral is elementary: over an interval of
    // length L centred at m it gives L e^{i kappa m} sinc(kappa L / 2). The
    // remaining integral runs over s = |tau| in [0, dt], both signs together.
    quad::RealIntegrand f = [&](double s) {
        const double L = dt - s;
        const double k = 0.5 * kappa * L;
        const cd pos = kernel.correlation(s) * std::exp(cd(0.0, 0.5 * kappa * (dt - s) - gamma * s));
        const cd neg = kernel.correlation(-s) * std::exp(cd(0.0, 0.5 * kappa * (dt + s) + gamma * s));
        return L * sinc(k) * (pos - neg);
    };

    const double osc = std::abs(gamma) + std::abs(kappa);
    const double cap = osc > 0.0 ? pi / osc : dt;
    std::vector<double> breaks;
    double x = kernel.feature_scale > 0.0 ? std::min(kernel.feature_scale, cap) : cap;
    while (x < dt) {
        breaks.push_back(x);
        x += std::min(x, cap);
    }

    // The two signs of tau cancel, exactly so for some entries; their summed
    // magnitude sets the roundoff floor of the result.
    quad::RealIntegrand magnitude = [&](double s) {
        return cd((dt - s) * (std::abs(kernel.correlation(s)) + std::abs(kernel.correlation(-s))), 0.0);
    };
    const double scale =
        quad::integrate_interval(magnitude, 0.0, dt, {1e-3, 1e-300, cfg.max_subdivisions}, breaks).value.real();
    quad::QuadratureConfig c = cfg;
    c.abs_tol = std::max(cfg.abs_tol, 64.0 * std::numeric_limits<double>::epsilon() * scale);

    const auto r = quad::integrate_interval(f, 0.0, dt, c, breaks);
    return cd(0.0, -0.5 * kCoefficientNormalization / dt) * r.value;
}

cd hamiltonian_entry_2d(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b, Sign e, Sign ep,
                     const quad::QuadratureConfig& cfg) {
    sys.validate();
    check_qubits(a, b);
    const double alpha = sign_value(e) * sys.omega(a);
    const double gamma = sign_value(ep) * sys.omega(b);
    quad::Kernel2d f = [&](double t1, double t2) {
        const double tau = t2 - t1;
        const double sgn = tau > 0.0 ? 1.0 : (tau < 0.0 ? -1.0 : 0.0);
        return std::exp(cd(0.0, alpha * t1 - gamma * t2)) * (sgn * kernel.correlation(tau));
    };
    const auto r = quad::integrate_square_2d(f, sys.delta_t, cfg, square_options(kernel, alpha, gamma));
    return cd(0.0, -0.5 * kCoefficientNormalization / sys.delta_t) * r.value;
}

CoefficientBlock hamiltonian_block(const TimeDomainKernel& kernel, const SystemConfig& sys, int a, int b,
                                   const CoefficientOptions& opts) {
    CoefficientBlock blk{Eigen::Matrix2cd::Zero(), BlockKind::Hamiltonian, a, b};
    for (Sign e : kSigns)
        for (Sign ep : kSigns) blk(e, ep) = hamiltonian_entry(kernel, sys, a, b, e, ep, opts.time);
    return blk;
}

CoefficientBlock hamiltonian_block(const BathSpectrum& bath, const SystemConfig& sys, int a, int b,
                                   const CoefficientOptions& opts) {
    return hamiltonian_block(TimeDomainKernel::from_bath(bath), sys, a, b, opts);
}

const Eigen::Matrix2cd& psi_matrix() {
    static const Eigen::Matrix2cd psi = [] {
        Eigen::Matrix2cd m;
        m << cd(0.5, 0.0), cd(0.0, 0.5), cd(0.5, 0.0), cd(0.0, -0.5);
        return m;
    }();
    return psi;
}

Eigen::Matrix2cd psi_transform(const Eigen::Matrix2cd& m) { return psi_matrix().adjoint() * m * psi_matrix(); }

Eigen::Matrix2cd psi_transform(const CoefficientBlock& block) { return psi_transform(block.entries); }

CoefficientSet compute_coefficients(const BathSpectrum& bath, const SystemConfig& sys, DissipativePath path,
                                    const CoefficientOptions& opts) {
    bath.validate();
    sys.validate();
    CoefficientSet set{bath, sys, {}, {}};
    const TimeDomainKernel kernel = TimeDomainKernel::from_bath(bath);
    for (int a = 1; a <= 2; ++a) {
        for (int b = 1; b <= 2; ++b) {
            const int k = 2 * (a - 1) + (b - 1);
            set.dissipative[k] = path == DissipativePath::Frequency
                                     ? dissipative_block_frequency_domain(bath, sys, a, b, opts)
                                     : dissipative_block_time_domain(kernel, sys, a, b, opts);
            set.hamiltonian[k] = hamiltonian_block(kernel, sys, a, b, opts);
        }
    }
    return set;
}

KossakowskiMatrix kossakowski_from_blocks(const std::array<CoefficientBlock, 4>& dissipative, double lambda,
                                          const CoefficientOptions& opts) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and non-negative");
    Eigen::Matrix4cd c;
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            c.block<2, 2>(2 * (a - 1), 2 * (b - 1)) = psi_transform(dissipative[2 * (a - 1) + (b - 1)]);
    c *= lambda * lambda;

    const double norm = c.norm();
    const double asym = (c - c.adjoint()).norm();
    if (asym > opts.hermiticity_tol * norm) {
        std::ostringstream msg;
        msg << "Kossakowski matrix not Hermitian: ||C - C^dag|| = " << asym << ", ||C|| = " << norm;
        throw ConsistencyError(msg.str());
    }
    const Eigen::Matrix4cd herm = 0.5 * (c + c.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm);
    Eigen::Vector4d ev = es.eigenvalues();

    KossakowskiMatrix out;
    out.min_eigenvalue = ev.minCoeff();
    if (out.min_eigenvalue < -opts.positivity_tol * norm) {
        std::ostringstream msg;
        msg << "Kossakowski matrix not positive: min eigenvalue " << out.min_eigenvalue << ", ||C|| = " << norm;
        throw ConsistencyError(msg.str());
    }
    if (out.min_eigenvalue < 0.0) {
        ev = ev.cwiseMax(0.0);
        out.entries = es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
    } else {
        out.entries = herm;
    }
    out.max_eigenvalue = ev.maxCoeff();
    return out;
}

KossakowskiMatrix kossakowski(const BathSpectrum& bath, const SystemConfig& sys, const CoefficientOptions& opts) {
    bath.validate();
    sys.validate();
    std::array<CoefficientBlock, 4> blocks;
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            blocks[2 * (a - 1) + (b - 1)] = dissipative_block_frequency_domain(bath, sys, a, b, opts);
    return kossakowski_from_blocks(blocks, sys.lambda, opts);
}

LambShiftInteraction lamb_shift_from_blocks(const CoefficientBlock& h12, const CoefficientBlock& h21,
                                            const CoefficientOptions& opts) {
    const Eigen::Matrix2cd m = psi_transform(h12) + psi_transform(h21).transpose();
    LambShiftInteraction out;
    out.h = m.real();
    out.imag_residue = m.imag().norm();
    const double norm = m.norm();
    if (out.imag_residue > opts.reality_tol * norm) {
        std::ostringstream msg;
        msg << "bath-mediated interaction not real: imaginary residue " << out.imag_residue << ", ||h|| = " << norm;
        throw ConsistencyError(msg.str());
    }
    return out;
}

LambShiftInteraction lamb_shift_interaction(const TimeDomainKernel& kernel, const SystemConfig& sys,
                                            const CoefficientOptions& opts) {
    return lamb_shift_from_blocks(hamiltonian_block(kernel, sys, 1, 2, opts), hamiltonian_block(kernel, sys, 2, 1, opts),
                                  opts);
}

LambShiftInteraction lamb_shift_interaction(const BathSpectrum& bath, const SystemConfig& sys,
                                            const CoefficientOptions& opts) {
    return lamb_shift_interaction(TimeDomainKernel::from_bath(bath), sys, opts);
}

std::shared_ptr<const CoefficientSet> CoefficientCache::get(const BathSpectrum& bath, const SystemConfig& sys,
                                                            DissipativePath path) {
    const Key key{bath.beta, bath.omega_c, sys.omega1, sys.omega2, sys.delta_t, static_cast<int>(path)};
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    SystemConfig stripped = sys;
    stripped.lambda = 0.0;
    auto value = std::make_shared<const CoefficientSet>(compute_coefficients(bath, stripped, path, opts_));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(value));
    return it->second;
}

std::size_t CoefficientCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

}  // namespace cgbath
