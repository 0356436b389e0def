#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cgbath/errors.hpp"
#include "cgbath/quadrature.hpp"

using namespace cgbath;
using namespace cgbath::quad;
using std::numbers::pi;

namespace {

QuadratureConfig tight() { return {1e-12, 1e-300, 100000}; }

}  // namespace

TEST(Interval, PolynomialIsExact) {
    auto r = integrate_interval([](double x) { return cd(x * x * x - 2.0 * x, 0.0); }, -1.0, 3.0, tight());
    EXPECT_NEAR(r.value.real(), 12.0, 1e-13);
    EXPECT_EQ(r.value.imag(), 0.0);
}

TEST(Interval, OscillatoryComplex) {
    // int_0^{10} e^{i 7 x} dx
    const double k = 7.0, L = 10.0;
    auto r = integrate_interval([&](double x) { return std::exp(cd(0.0, k * x)); }, 0.0, L, tight());
    const cd exact = (std::exp(cd(0.0, k * L)) - 1.0) / cd(0.0, k);
    EXPECT_LT(std::abs(r.value - exact), 1e-12);
}

TEST(Interval, EndpointSingularityConverges) {
    auto r = integrate_interval([](double x) { return cd(1.0 / std::sqrt(x), 0.0); }, 0.0, 1.0, {1e-9, 1e-300, 10000});
    EXPECT_NEAR(r.value.real(), 2.0, 1e-8);
}

TEST(Interval, BreakpointsDoNotChangeResult) {
    auto f = [](double x) { return cd(std::exp(-x) * std::cos(3.0 * x), 0.0); };
    const double bp[] = {0.5, 1.0, 2.5};
    auto a = integrate_interval(f, 0.0, 4.0, tight());
    auto b = integrate_interval(f, 0.0, 4.0, tight(), bp);
    EXPECT_NEAR(a.value.real(), b.value.real(), 1e-13);
}

TEST(Interval, Deterministic) {
    auto f = [](double x) { return cd(std::sin(x * x), std::cos(x)); };
    auto a = integrate_interval(f, 0.0, 12.0, tight());
    auto b = integrate_interval(f, 0.0, 12.0, tight());
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error, b.error);
}

TEST(Interval, SubdivisionLimitThrowsWithEstimate) {
    auto f = [](double x) { return cd(std::sin(1.0 / (x + 1e-9)), 0.0); };
    try {
        integrate_interval(f, 0.0, 1.0, {1e-14, 1e-300, 5});
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_TRUE(std::isfinite(e.estimate().real()));
        EXPECT_GT(e.error_estimate(), 0.0);
    }
}

TEST(Interval, ConfigValidation) {
    auto f = [](double) { return cd(1.0); };
    EXPECT_THROW(integrate_interval(f, 0.0, 1.0, {0.0, 1e-14, 10}), DomainError);
    EXPECT_THROW(integrate_interval(f, 0.0, 1.0, {1e-10, -1.0, 10}), DomainError);
    EXPECT_THROW(integrate_interval(f, 0.0, 1.0, {1e-10, 1e-14, 0}), DomainError);
}

TEST(Interval, UniformPanels) {
    auto r = integrate_interval_uniform([](double x) { return cd(std::cos(x), 0.0); }, 0.0, pi / 2, tight(), 7);
    EXPECT_NEAR(r.value.real(), 1.0, 1e-13);
}

TEST(SemiInfinite, Exponential) {
    auto r = integrate_semi_infinite([](double x) { return cd(std::exp(-2.0 * x), 0.0); }, tight(), 0.0);
    EXPECT_NEAR(r.value.real(), 0.5, 1e-12);
}

TEST(SemiInfinite, AlgebraicDecay) {
    auto r = integrate_semi_infinite([](double x) { return cd(1.0 / ((1.0 + x) * (1.0 + x)), 0.0); },
                                     {1e-8, 1e-300, 100000}, 0.0);
    EXPECT_NEAR(r.value.real(), 1.0, 1e-7);
}

TEST(SemiInfinite, FullLineGaussian) {
    auto r = integrate_semi_infinite([](double x) { return cd(std::exp(-x * x), 0.0); }, tight(), 0.0,
                                     Range::FullLine);
    EXPECT_NEAR(r.value.real(), std::sqrt(pi), 1e-12);
}

TEST(SemiInfinite, OscillatingDampedCosine) {
    // int_0^inf e^{-x/10} cos(5 x) dx = 0.1 / (0.01 + 25)
    auto r = integrate_semi_infinite([](double x) { return cd(std::exp(-0.1 * x) * std::cos(5.0 * x), 0.0); },
                                     tight(), 5.0, Range::HalfLine, 1.0);
    EXPECT_NEAR(r.value.real(), 0.1 / (0.01 + 25.0), 1e-12);
}

TEST(FourierTail, MatchesClosedForm) {
    // int_s^inf e^{-w} e^{ikw} dw = e^{(ik - 1) s} / (1 - ik)
    for (double k : {3.0, -3.0, 40.0}) {
        const double s = 2.0;
        auto r = integrate_fourier_tail([](cd w) { return std::exp(-w); }, s, k, tight());
        const cd exact = std::exp(cd(-1.0, k) * s) / cd(1.0, -k);
        EXPECT_LT(std::abs(r.value - exact), 1e-12 * std::abs(exact)) << "k=" << k;
    }
}

TEST(FourierTail, RationalIntegrand) {
    // int_1^inf e^{i k w} / w^2 dw against a long direct integration.
    const double k = 6.0;
    auto r = integrate_fourier_tail([](cd w) { return 1.0 / (w * w); }, 1.0, k, tight());
    std::vector<double> bp;
    for (double j = 1.0; 1.0 + j * pi / k < 2001.0; j += 1.0) bp.push_back(1.0 + j * pi / k);
    auto direct = integrate_interval([&](double w) { return std::exp(cd(0.0, k * w)) / (w * w); }, 1.0, 2001.0,
                                     {1e-12, 1e-300, 200000}, bp);
    // Remaining tail is bounded by 2/(k 2001^2).
    EXPECT_LT(std::abs(r.value - direct.value), 1e-7);
}

TEST(FourierTail, RejectsZeroFrequency) {
    EXPECT_THROW(integrate_fourier_tail([](cd) { return cd(1.0); }, 0.0, 0.0, tight()), DomainError);
}

TEST(Rectangle, SeparableProduct) {
    auto r = integrate_rectangle_2d([](double x, double y) { return cd(std::cos(x) * std::exp(y), 0.0); }, 0.0,
                                    pi / 2, 0.0, 1.0, tight());
    EXPECT_NEAR(r.value.real(), std::exp(1.0) - 1.0, 1e-12);
}

TEST(Square, DiagonalJumpNeedsSplit) {
    // int_0^1 int_0^1 sign(y - x) (x + 2 y) dx dy = 5/6 - 2/3
    Kernel2d f = [](double x, double y) { return cd((y > x ? 1.0 : (y < x ? -1.0 : 0.0)) * (x + 2.0 * y), 0.0); };
    SquareOptions o;
    o.diagonal_split = true;
    auto r = integrate_square_2d(f, 1.0, tight(), o);
    EXPECT_NEAR(r.value.real(), 1.0 / 6.0, 1e-12);
}

TEST(Square, CancellingKernelReachesAbsoluteFloor) {
    // Antisymmetric under x <-> y: exact value zero.
    Kernel2d f = [](double x, double y) { return cd(std::tanh(50.0 * (y - x)), 0.0); };
    SquareOptions o;
    o.diagonal_split = true;
    o.diagonal_feature_scale = 0.02;
    auto r = integrate_square_2d(f, 2.0, {1e-10, 1e-300, 200000}, o);
    EXPECT_LT(std::abs(r.value), 1e-10);
}

TEST(Square, PeakedDiagonalFeature) {
    // int int e^{-|x - y| / s} over [0, L]^2 = 2 s (L - s (1 - e^{-L/s}))
    const double s = 1e-3, L = 3.0;
    Kernel2d f = [&](double x, double y) { return cd(std::exp(-std::abs(x - y) / s), 0.0); };
    SquareOptions o;
    o.diagonal_split = true;
    o.diagonal_feature_scale = s;
    auto r = integrate_square_2d(f, L, tight(), o);
    EXPECT_NEAR(r.value.real(), 2.0 * s * (L - s * (1.0 - std::exp(-L / s))), 1e-12);
}
