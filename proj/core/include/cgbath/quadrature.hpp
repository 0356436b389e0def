#pragma once

// Adaptive Gauss-Kronrod kernels used by the coefficient integrals.
//
// All routines are globally adaptive: the panel with the largest error
// estimate is bisected until the total error satisfies
//   error <= max(abs_tol, rel_tol * |result|).
// Panels are summed in a fixed order, so results are bit-reproducible for a
// given configuration.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace cgbath::quad {

using cd = std::complex<double>;
using RealIntegrand = std::function<cd(double)>;
using ComplexIntegrand = std::function<cd(cd)>;
using Kernel2d = std::function<cd(double, double)>;

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_subdivisions = 200000;

    /// Throws DomainError unless tolerances are positive and finite and
    /// max_subdivisions >= 1.
    void validate() const;
};

struct QuadratureResult {
    cd value{};
    double error = 0.0;
    /// Integral of |f| as seen by the Kronrod rule; used for tail tests.
    double abs_value = 0.0;
    std::size_t subdivisions = 0;
};

enum class Range { HalfLine, FullLine };

/// Integral of f over [a, b]. `breakpoints` (strictly inside (a, b), sorted)
/// seed the initial partition; place them at known features and at most one
/// oscillation period apart.
QuadratureResult integrate_interval(const RealIntegrand& f, double a, double b,
                                    const QuadratureConfig& cfg,
                                    std::span<const double> breakpoints = {});

/// Same, with `panels` equal-width initial panels.
QuadratureResult integrate_interval_uniform(const RealIntegrand& f, double a, double b,
                                            const QuadratureConfig& cfg, std::size_t panels);

/// Integral of f over [0, inf) (HalfLine) or (-inf, inf) (FullLine).
///
/// The line is walked in panels whose width starts at `length_scale`, doubles
/// each step, and is capped at pi / oscillation_scale when that is positive.
/// The walk stops once three consecutive panels carry an L1 mass below a tenth
/// of the requested tolerance; the last such mass is added to the error as the
/// tail estimate. f must decay at least like 1/x^2 (or oscillate with decaying
/// envelope) for the walk to terminate.
QuadratureResult integrate_semi_infinite(const RealIntegrand& f, const QuadratureConfig& cfg,
                                         double oscillation_scale, Range range = Range::HalfLine,
                                         double length_scale = 1.0);

/// Integral of f(w) exp(i k w) over [start, inf) for f analytic and of
/// sub-exponential growth in the quarter plane Re w >= start, sign(k) Im w >= 0.
/// The contour is rotated onto the vertical ray w = start + i sign(k) y, where
/// the oscillation becomes the decay exp(-|k| y).
QuadratureResult integrate_fourier_tail(const ComplexIntegrand& f, double start, double k,
                                        const QuadratureConfig& cfg);

/// Integral of f over the rectangle [x0, x1] x [y0, y1] using an adaptive
/// tensor 15-point Kronrod rule. Each cell is bisected along the direction
/// whose embedded 7-point Gauss comparison disagrees most.
QuadratureResult integrate_rectangle_2d(const Kernel2d& f, double x0, double x1, double y0,
                                        double y1, const QuadratureConfig& cfg,
                                        std::span<const double> x_breaks = {},
                                        std::span<const double> y_breaks = {});

struct SquareOptions {
    /// Integrate the two triangles t1 < t2 and t1 > t2 separately, each mapped
    /// onto a rectangle whose edge is the diagonal. Required whenever the kernel
    /// jumps across t1 = t2.
    bool diagonal_split = false;
    /// Width of features concentrated along t1 = t2 (e.g. the correlation time
    /// of the bath). When positive and diagonal_split is set, the initial
    /// partition is graded geometrically from this width away from the diagonal.
    double diagonal_feature_scale = 0.0;
    /// Largest angular frequency of the kernel's phase. Caps the initial cell
    /// width at one period.
    double oscillation_scale = 0.0;
};

/// Integral of kernel(t1, t2) over [0, delta_t]^2.
QuadratureResult integrate_square_2d(const Kernel2d& kernel, double delta_t,
                                     const QuadratureConfig& cfg, const SquareOptions& opts = {});

}  // namespace cgbath::quad
