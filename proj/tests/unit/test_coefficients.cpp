#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "cgbath/coefficients.hpp"
#include "cgbath/errors.hpp"
#include "cgbath/math.hpp"

using namespace cgbath;
using std::numbers::pi;

namespace {

const quad::QuadratureConfig kTime{1e-11, 1e-300, 2000000};
const quad::QuadratureConfig kFreq{1e-11, 1e-300, 400000};

// int_0^dt e^{ikt} dt
cd phase_integral(double k, double dt) {
    if (k == 0.0) return dt;
    return (std::exp(cd(0.0, k * dt)) - 1.0) / cd(0.0, k);
}

double rel_diff(cd a, cd b, double scale) { return std::abs(a - b) / scale; }

}  // namespace

TEST(SystemConfig, Validation) {
    EXPECT_NO_THROW((SystemConfig{1.0, 1.2, 10.0, 0.1}.validate()));
    EXPECT_THROW((SystemConfig{0.0, 1.2, 10.0, 0.1}.validate()), DomainError);
    EXPECT_THROW((SystemConfig{1.0, -1.0, 10.0, 0.1}.validate()), DomainError);
    EXPECT_THROW((SystemConfig{1.0, 1.0, 0.0, 0.1}.validate()), DomainError);
    EXPECT_THROW((SystemConfig{1.0, 1.0, 1.0, -0.1}.validate()), DomainError);
    EXPECT_THROW((SystemConfig{1.0, 1.0, NAN, 0.1}.validate()), DomainError);
    EXPECT_DOUBLE_EQ((SystemConfig{1.0, 1.2, 1.0, 0.0}.delta_omega()), 0.1);
}

TEST(Dissipative, ConstantKernelClosedForm) {
    // G = 1 separates: D = (N / dt) (int e^{i alpha t}) (int e^{-i gamma t}).
    const SystemConfig sys{1.0, 1.3, 4.0, 0.0};
    const auto kernel = TimeDomainKernel::constant(1.0);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (Sign e : kSigns)
                for (Sign ep : kSigns) {
                    const double alpha = sign_value(e) * sys.omega(a), gamma = sign_value(ep) * sys.omega(b);
                    const cd exact = kCoefficientNormalization / sys.delta_t * phase_integral(alpha, sys.delta_t) *
                                     phase_integral(-gamma, sys.delta_t);
                    const cd got = dissipative_entry_time_domain(kernel, sys, a, b, e, ep, kTime);
                    EXPECT_LT(std::abs(got - exact), 1e-10 * std::max(1.0, std::abs(exact)));
                }
}

TEST(Dissipative, ConstantKernelEqualFrequencySincSquared) {
    // a = b, e = e': N dt sinc^2(w dt / 2).
    const SystemConfig sys{0.7, 0.7, 3.0, 0.0};
    const cd got = dissipative_entry_time_domain(TimeDomainKernel::constant(1.0), sys, 1, 1, Sign::Plus, Sign::Plus,
                                                 kTime);
    const double s = sinc(0.7 * 1.5);
    EXPECT_NEAR(got.real(), kCoefficientNormalization * 3.0 * s * s, 1e-10);
    EXPECT_NEAR(got.imag(), 0.0, 1e-10);
}

TEST(Dissipative, FrequencyMatchesTimeDomain) {
    struct Case {
        BathSpectrum bath;
        SystemConfig sys;
    };
    for (const Case& c : {Case{{1.0, 5.0}, {1.0, 1.2, 3.0, 0.0}}, Case{{0.5, 50.0}, {0.8, 1.0, 6.0, 0.0}},
                          Case{{5.0, 2.0}, {1.0, 1.0, 2.0, 0.0}}}) {
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                const auto f = dissipative_block_frequency_domain(c.bath, c.sys, a, b);
                const auto t = dissipative_block_time_domain(c.bath, c.sys, a, b);
                const double scale = f.entries.cwiseAbs().maxCoeff();
                for (Sign e : kSigns)
                    for (Sign ep : kSigns) EXPECT_LT(rel_diff(f(e, ep), t(e, ep), scale), 1e-8);
            }
    }
}

TEST(Dissipative, AdjointSymmetry) {
    // conj(D^{ab}_{e e'}) = D^{ba}_{e' e}
    const BathSpectrum bath{0.3, 30.0};
    const SystemConfig sys{1.0, 1.4, 7.0, 0.0};
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (Sign e : kSigns)
                for (Sign ep : kSigns) {
                    const cd x = dissipative_entry_frequency_domain(bath, sys, a, b, e, ep, kFreq);
                    const cd y = dissipative_entry_frequency_domain(bath, sys, b, a, ep, e, kFreq);
                    EXPECT_LT(std::abs(std::conj(x) - y), 1e-12 * std::max(1.0, std::abs(x)));
                }
}

TEST(Dissipative, DiagonalEntriesPositive) {
    const BathSpectrum bath{2.0, 4.0};
    const SystemConfig sys{1.0, 1.5, 5.0, 0.0};
    for (int a = 1; a <= 2; ++a)
        for (Sign e : kSigns) {
            const cd d = dissipative_entry_frequency_domain(bath, sys, a, a, e, e, kFreq);
            EXPECT_GT(d.real(), 0.0);
            EXPECT_LT(std::abs(d.imag()), 1e-14 * d.real());
        }
}

TEST(Dissipative, DetailedBalanceAtLongTimes) {
    // D^{aa}_{++} / D^{aa}_{--} -> e^{-beta w}
    const BathSpectrum bath{1.0, 20.0};
    const SystemConfig sys{1.0, 1.0, 400.0, 0.0};
    const double up = dissipative_entry_frequency_domain(bath, sys, 1, 1, Sign::Plus, Sign::Plus, kFreq).real();
    const double down = dissipative_entry_frequency_domain(bath, sys, 1, 1, Sign::Minus, Sign::Minus, kFreq).real();
    EXPECT_NEAR(up / down, std::exp(-1.0), 1e-2);
}

TEST(Dissipative, RejectsBadQubitIndex) {
    EXPECT_THROW(dissipative_entry_frequency_domain({1.0, 1.0}, {1.0, 1.0, 1.0, 0.0}, 0, 1, Sign::Plus, Sign::Plus,
                                                    kFreq),
                 DomainError);
    EXPECT_THROW(dissipative_block_time_domain(BathSpectrum{1.0, 1.0}, SystemConfig{1.0, 1.0, 1.0, 0.0}, 1, 3),
                 DomainError);
}

TEST(Hamiltonian, ConstantKernelClosedForm) {
    // int int e^{i(alpha t1 - gamma t2)} sign(t2 - t1)
    //   = [2 E(alpha - gamma) - (1 + e^{i alpha dt}) E(-gamma)] / (i alpha),  E(k) = int_0^dt e^{ikt}
    const SystemConfig sys{1.0, 1.3, 4.0, 0.0};
    const auto kernel = TimeDomainKernel::constant(cd(0.7, -0.2));
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (Sign e : kSigns)
                for (Sign ep : kSigns) {
                    const double alpha = sign_value(e) * sys.omega(a), gamma = sign_value(ep) * sys.omega(b);
                    const double dt = sys.delta_t;
                    const cd integral = (2.0 * phase_integral(alpha - gamma, dt) -
                                         (1.0 + std::exp(cd(0.0, alpha * dt))) * phase_integral(-gamma, dt)) /
                                        cd(0.0, alpha);
                    const cd exact = cd(0.0, -0.5 * kCoefficientNormalization / dt) * cd(0.7, -0.2) * integral;
                    const cd one = hamiltonian_entry(kernel, sys, a, b, e, ep, kTime);
                    const cd two = hamiltonian_entry_2d(kernel, sys, a, b, e, ep, kTime);
                    EXPECT_LT(std::abs(one - exact), 1e-10 * std::max(1.0, std::abs(exact)));
                    EXPECT_LT(std::abs(two - exact), 1e-9 * std::max(1.0, std::abs(exact)));
                }
}

TEST(Hamiltonian, ReducedMatchesSquareQuadrature) {
    const BathSpectrum bath{2.0, 10.0};
    const SystemConfig sys{1.0, 1.25, 6.0, 0.0};
    const auto kernel = TimeDomainKernel::from_bath(bath);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (Sign e : kSigns)
                for (Sign ep : kSigns) {
                    const cd one = hamiltonian_entry(kernel, sys, a, b, e, ep, kTime);
                    const cd two = hamiltonian_entry_2d(kernel, sys, a, b, e, ep, kTime);
                    EXPECT_LT(std::abs(one - two), 1e-8 * std::max(1.0, std::abs(two)));
                }
}

TEST(Hamiltonian, PsiTransformedBlocksAreHermitian) {
    const BathSpectrum bath{1.0, 10.0};
    const SystemConfig sys{1.0, 1.2, 8.0, 0.0};
    Eigen::Matrix4cd k;
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            k.block<2, 2>(2 * (a - 1), 2 * (b - 1)) = psi_transform(hamiltonian_block(bath, sys, a, b));
    EXPECT_LT((k - k.adjoint()).norm(), 1e-9 * k.norm());
}

TEST(Psi, MatrixAndTransform) {
    const auto& psi = psi_matrix();
    EXPECT_EQ(psi(0, 0), cd(0.5, 0.0));
    EXPECT_EQ(psi(0, 1), cd(0.0, 0.5));
    EXPECT_EQ(psi(1, 0), cd(0.5, 0.0));
    EXPECT_EQ(psi(1, 1), cd(0.0, -0.5));
    // sigma_+ = (s1 + i s2)/2 has Pauli coefficients Psi row e = +.
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = 1.0;
    const Eigen::Matrix2cd t = psi_transform(m);
    EXPECT_LT((t - psi.row(0).adjoint() * psi.row(0)).norm(), 1e-15);
}

TEST(Kossakowski, HermitianPositiveAndScaledByLambdaSquared) {
    const BathSpectrum bath{1.0, 10.0};
    const SystemConfig sys{1.0, 1.2, 10.0, 0.3};
    const KossakowskiMatrix c = kossakowski(bath, sys);
    EXPECT_LT((c.entries - c.entries.adjoint()).norm(), 1e-14);
    EXPECT_GE(c.min_eigenvalue, -1e-8 * c.entries.norm());
    SystemConfig unit = sys;
    unit.lambda = 1.0;
    const KossakowskiMatrix c1 = kossakowski(bath, unit);
    EXPECT_LT((c.entries - 0.09 * c1.entries).norm(), 1e-12 * c1.entries.norm());
    EXPECT_NEAR(c.max_eigenvalue, 0.09 * c1.max_eigenvalue, 1e-12 * c1.max_eigenvalue);
}

TEST(Kossakowski, DiagonalMatchesSpectralCombination) {
    // C_{(a,1),(a,1)} = (D_{++} + D_{+-} + D_{-+} + D_{--}) / 4
    const BathSpectrum bath{0.5, 5.0};
    const SystemConfig sys{1.0, 1.1, 4.0, 1.0};
    const auto blk = dissipative_block_frequency_domain(bath, sys, 1, 1);
    const KossakowskiMatrix c = kossakowski(bath, sys);
    EXPECT_NEAR(c.entries(0, 0).real(), blk.entries.sum().real() / 4.0, 1e-12 * c.entries.norm());
}

TEST(Kossakowski, RejectsIndefiniteBlocks) {
    std::array<CoefficientBlock, 4> blocks;
    for (int k = 0; k < 4; ++k) blocks[static_cast<std::size_t>(k)] = {Eigen::Matrix2cd::Zero(), BlockKind::Dissipative, k / 2 + 1, k % 2 + 1};
    blocks[0].entries(0, 0) = -1.0;
    EXPECT_THROW(kossakowski_from_blocks(blocks, 1.0), ConsistencyError);
    blocks[0].entries(0, 0) = 1.0;
    blocks[1].entries(0, 0) = cd(0.0, 5.0);
    EXPECT_THROW(kossakowski_from_blocks(blocks, 1.0), ConsistencyError);
}

TEST(Kossakowski, ClampsRoundoffNegatives) {
    std::array<CoefficientBlock, 4> blocks;
    for (int k = 0; k < 4; ++k) blocks[static_cast<std::size_t>(k)] = {Eigen::Matrix2cd::Zero(), BlockKind::Dissipative, k / 2 + 1, k % 2 + 1};
    // Psi^dag diag(1, -1e-12) Psi has eigenvalues 1/2 and -1e-12/2.
    blocks[0].entries(0, 0) = 1.0;
    blocks[0].entries(1, 1) = -1e-12;
    const KossakowskiMatrix c = kossakowski_from_blocks(blocks, 1.0);
    EXPECT_LT(c.min_eigenvalue, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(c.entries);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-15);
}

TEST(LambShift, InteractionIsReal) {
    const BathSpectrum bath{1.0, 10.0};
    const SystemConfig sys{1.0, 1.2, 10.0, 0.1};
    const LambShiftInteraction h = lamb_shift_interaction(bath, sys);
    EXPECT_LT(h.imag_residue, 1e-10 * h.h.norm());
    EXPECT_GT(h.h.norm(), 0.0);
}

TEST(LambShift, RejectsComplexInteraction) {
    CoefficientBlock h12{Eigen::Matrix2cd::Zero(), BlockKind::Hamiltonian, 1, 2};
    CoefficientBlock h21{Eigen::Matrix2cd::Zero(), BlockKind::Hamiltonian, 2, 1};
    h12.entries(0, 0) = 1.0;
    EXPECT_THROW(lamb_shift_from_blocks(h12, h21), ConsistencyError);
}

TEST(CoefficientSet, PathsAgreeAndCacheIsShared) {
    const BathSpectrum bath{10.0, 10.0};
    const SystemConfig sys{1.0, 1.2, 4.0, 0.5};
    CoefficientCache cache;
    auto f = cache.get(bath, sys, DissipativePath::Frequency);
    auto t = cache.get(bath, sys, DissipativePath::Time);
    SystemConfig other_lambda = sys;
    other_lambda.lambda = 0.9;
    EXPECT_EQ(cache.get(bath, other_lambda, DissipativePath::Frequency).get(), f.get());
    EXPECT_EQ(cache.size(), 2u);
    for (int k = 0; k < 4; ++k) {
        const double scale = f->dissipative[static_cast<std::size_t>(k)].entries.cwiseAbs().maxCoeff();
        EXPECT_LT((f->dissipative[static_cast<std::size_t>(k)].entries - t->dissipative[static_cast<std::size_t>(k)].entries)
                      .cwiseAbs()
                      .maxCoeff() /
                      scale,
                  1e-8);
        EXPECT_EQ(f->hamiltonian[static_cast<std::size_t>(k)].entries, t->hamiltonian[static_cast<std::size_t>(k)].entries);
    }
}

TEST(CoefficientSet, CacheConcurrentAccess) {
    CoefficientCache cache;
    std::vector<std::shared_ptr<const CoefficientSet>> got(4);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < got.size(); ++i)
            pool.emplace_back([&, i] { got[i] = cache.get({1.0, 3.0}, {1.0, 1.1, 2.0, 0.0}); });
    }
    for (const auto& g : got) EXPECT_EQ(g->dissipative[1].entries, got[0]->dissipative[1].entries);
    EXPECT_EQ(cache.size(), 1u);
}

namespace {

// Independent reduction of the dissipative double integral: with t2 = t1 + s
// the t1 integral is elementary, leaving one integral over s in [0, dt].
cd dissipative_reduced(const BathSpectrum& bath, const SystemConfig& sys, int a, int b, Sign e, Sign ep) {
    const double alpha = sign_value(e) * sys.omega(a), gamma = sign_value(ep) * sys.omega(b);
    const double kappa = alpha - gamma, dt = sys.delta_t;
    quad::RealIntegrand f = [&](double s) {
        const double L = dt - s;
        const cd pos = correlation_closed_form(bath, s) * std::exp(cd(0.0, 0.5 * kappa * (dt - s) - gamma * s));
        const cd neg = correlation_closed_form(bath, -s) * std::exp(cd(0.0, 0.5 * kappa * (dt + s) + gamma * s));
        return L * sinc(0.5 * kappa * L) * (pos + neg);
    };
    const double cap = pi / (std::abs(gamma) + std::abs(kappa));
    std::vector<double> breaks;
    for (double x = std::min({bath.correlation_time(), bath.beta, cap}); x < dt; x += std::min(x, cap))
        breaks.push_back(x);
    return kCoefficientNormalization / dt * quad::integrate_interval(f, 0.0, dt, {1e-12, 1e-300, 4000000}, breaks).value;
}

}  // namespace

TEST(Dissipative, FrequencyMatchesReducedTimeIntegralOverWideRange) {
    for (double beta : {0.01, 1.0, 100.0})
        for (double wc : {1.0, 1000.0})
            for (double w2 : {1.0, 1.2})
                for (double dt : {0.5, 10.0, 200.0}) {
                    const BathSpectrum bath{beta, wc};
                    const SystemConfig sys{1.0, w2, dt, 0.0};
                    for (int a = 1; a <= 2; ++a)
                        for (int b = 1; b <= 2; ++b) {
                            const auto blk = dissipative_block_frequency_domain(bath, sys, a, b);
                            const double scale = blk.entries.cwiseAbs().maxCoeff();
                            for (Sign e : kSigns)
                                for (Sign ep : kSigns)
                                    EXPECT_LT(rel_diff(blk(e, ep), dissipative_reduced(bath, sys, a, b, e, ep), scale),
                                              1e-9)
                                        << "beta=" << beta << " wc=" << wc << " w2=" << w2 << " dt=" << dt;
                        }
                }
}
