#include "cgbath/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "cgbath/errors.hpp"

namespace cgbath::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod abscissae on [-1, 1] with the embedded 7-point Gauss rule
// (QUADPACK qk15 tables). Index 15 nodes from -1 to 1 so the 2-D rule can use
// a single array.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule15 {
    std::array<double, 15> node{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};
};

constexpr Rule15 make_rule() {
    Rule15 r;
    for (int i = 0; i < 7; ++i) {
        r.node[i] = -kXgk[i];
        r.node[14 - i] = kXgk[i];
        r.wk[i] = r.wk[14 - i] = kWgk[i];
        // Gauss nodes are the odd entries of kXgk.
        const double g = (i % 2 == 1) ? kWg[i / 2] : 0.0;
        r.wg[i] = r.wg[14 - i] = g;
    }
    r.node[7] = 0.0;
    r.wk[7] = kWgk[7];
    r.wg[7] = kWg[3];
    return r;
}

constexpr Rule15 kRule = make_rule();

struct Segment {
    double a = 0.0;
    double b = 0.0;
    cd value{};
    double error = 0.0;
    double abs_value = 0.0;
};

Segment gk15(const RealIntegrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<cd, 15> fv;
    for (int i = 0; i < 15; ++i) fv[i] = f(c + h * kRule.node[i]);
    cd resk{};
    cd resg{};
    double resabs = 0.0;
    for (int i = 0; i < 15; ++i) {
        resk += kRule.wk[i] * fv[i];
        resg += kRule.wg[i] * fv[i];
        resabs += kRule.wk[i] * std::abs(fv[i]);
    }
    const cd reskh = 0.5 * resk;
    double resasc = 0.0;
    for (int i = 0; i < 15; ++i) resasc += kRule.wk[i] * std::abs(fv[i] - reskh);

    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    if (!std::isfinite(std::abs(resk))) err = std::numeric_limits<double>::infinity();
    return {a, b, resk * h, err, resabs};
}

// Error level at which a result is accepted: the requested tolerance, or the
// roundoff floor of the rule when the integral cancels to far below its L1 mass.
double accept_level(const QuadratureConfig& cfg, cd value, double abs_value) {
    return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(value), 200.0 * kEps * abs_value});
}

struct ByError {
    bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

QuadratureResult finish(std::vector<Segment>& segs, std::size_t subdivisions) {
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    QuadratureResult r;
    for (const auto& s : segs) {
        r.value += s.value;
        r.error += s.error;
        r.abs_value += s.abs_value;
    }
    r.subdivisions = subdivisions;
    return r;
}

QuadratureResult adapt_1d(const RealIntegrand& f, std::vector<double> edges, const QuadratureConfig& cfg) {
    cfg.validate();
    std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
    std::vector<Segment> frozen;
    cd total{};
    double total_err = 0.0;
    double total_abs = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Segment s = gk15(f, edges[i], edges[i + 1]);
        total += s.value;
        total_err += s.error;
        total_abs += s.abs_value;
        heap.push(s);
    }
    std::size_t count = heap.size();
    auto target = [&] { return accept_level(cfg, total, total_abs); };

    while (!heap.empty() && total_err > target()) {
        if (count >= cfg.max_subdivisions) {
            throw NumericalError("adaptive quadrature: subdivision limit reached", total, total_err);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            std::abs(worst.b - worst.a) < 1e3 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            continue;
        }
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        ++count;
    }

    std::vector<Segment> segs = std::move(frozen);
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    QuadratureResult r = finish(segs, count);
    if (!(r.error <= accept_level(cfg, r.value, r.abs_value))) {
        throw NumericalError("adaptive quadrature: tolerance not reached", r.value, r.error);
    }
    return r;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw DomainError("rel_tol must be positive and finite");
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) throw DomainError("abs_tol must be positive and finite");
    if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

QuadratureResult integrate_interval(const RealIntegrand& f, double a, double b, const QuadratureConfig& cfg,
                                    std::span<const double> breakpoints) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integration limits must be finite");
    if (a == b) return {};
    if (b < a) {
        QuadratureResult r = integrate_interval(f, b, a, cfg, breakpoints);
        r.value = -r.value;
        return r;
    }
    std::vector<double> edges{a};
    for (double x : breakpoints) {
        if (x > edges.back() && x < b) edges.push_back(x);
    }
    edges.push_back(b);
    return adapt_1d(f, std::move(edges), cfg);
}

QuadratureResult integrate_interval_uniform(const RealIntegrand& f, double a, double b,
                                            const QuadratureConfig& cfg, std::size_t panels) {
    panels = std::max<std::size_t>(panels, 1);
    std::vector<double> breaks;
    breaks.reserve(panels);
    for (std::size_t i = 1; i < panels; ++i) breaks.push_back(a + (b - a) * static_cast<double>(i) / panels);
    return integrate_interval(f, a, b, cfg, breaks);
}

QuadratureResult integrate_semi_infinite(const RealIntegrand& f, const QuadratureConfig& cfg,
                                         double oscillation_scale, Range range, double length_scale) {
    cfg.validate();
    if (!(length_scale > 0.0) || !std::isfinite(length_scale)) throw DomainError("length_scale must be positive");
    if (!(oscillation_scale >= 0.0) || !std::isfinite(oscillation_scale)) {
        throw DomainError("oscillation_scale must be non-negative");
    }

    RealIntegrand g = f;
    if (range == Range::FullLine) g = [&f](double x) { return f(x) + f(-x); };

    const double cap = oscillation_scale > 0.0 ? std::numbers::pi / oscillation_scale
                                               : std::numeric_limits<double>::infinity();

    // Two passes: the first finds the magnitude of the integral, the second
    // (only if needed) reruns the panels with an absolute tolerance derived from
    // it so that cancellation between panels cannot hide error.
    auto walk = [&](const QuadratureConfig& panel_cfg, double stop_level, bool adaptive_stop) {
        QuadratureResult total;
        double x = 0.0;
        double width = std::min(length_scale, cap);
        int quiet = 0;
        double tail = 0.0;
        std::size_t panels = 0;
        while (true) {
            if (panels >= cfg.max_subdivisions) {
                throw NumericalError("semi-infinite quadrature: panel limit reached", total.value,
                                     total.error + tail);
            }
            QuadratureResult p = integrate_interval(g, x, x + width, panel_cfg);
            total.value += p.value;
            total.error += p.error;
            total.abs_value += p.abs_value;
            total.subdivisions += p.subdivisions;
            ++panels;
            x += width;
            width = std::min(2.0 * width, cap);
            const double level =
                adaptive_stop ? 0.1 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total.value)) : stop_level;
            if (p.abs_value <= level) {
                tail = p.abs_value;
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        }
        total.error += tail;
        return total;
    };

    QuadratureResult first = walk(cfg, 0.0, true);
    const double target = accept_level(cfg, first.value, first.abs_value);
    if (first.error <= target) return first;

    QuadratureConfig tight = cfg;
    tight.abs_tol = 1e-3 * target;
    tight.rel_tol = std::min(cfg.rel_tol, 1e-14 + 1e-3 * target / std::max(first.abs_value, 1e-300));
    tight.rel_tol = std::max(tight.rel_tol, 10.0 * kEps);
    QuadratureResult second = walk(tight, 0.1 * target, false);
    if (!(second.error <= accept_level(cfg, second.value, second.abs_value))) {
        throw NumericalError("semi-infinite quadrature: tolerance not reached", second.value, second.error);
    }
    return second;
}

QuadratureResult integrate_fourier_tail(const ComplexIntegrand& f, double start, double k,
                                        const QuadratureConfig& cfg) {
    if (!(k != 0.0) || !std::isfinite(k)) throw DomainError("fourier tail needs a finite non-zero frequency");
    const double s = k > 0.0 ? 1.0 : -1.0;
    const double ak = std::abs(k);
    const cd dir(0.0, s);
    RealIntegrand g = [&](double y) { return f(cd(start, 0.0) + dir * y) * std::exp(-ak * y); };
    QuadratureResult r = integrate_semi_infinite(g, cfg, 0.0, Range::HalfLine, 1.0 / ak);
    r.value *= dir * std::exp(cd(0.0, k * start));
    return r;
}

namespace {

struct Cell {
    double x0, x1, y0, y1;
    cd value;
    double err_x;
    double err_y;
    double abs_value;
    double error() const { return err_x + err_y; }
};

struct CellByError {
    bool operator()(const Cell& a, const Cell& b) const { return a.error() < b.error(); }
};

Cell gk15_2d(const Kernel2d& f, double x0, double x1, double y0, double y1) {
    const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    std::array<double, 15> ys;
    for (int j = 0; j < 15; ++j) ys[j] = cy + hy * kRule.node[j];
    cd kk{}, gk{}, kg{};
    double abs_sum = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double x = cx + hx * kRule.node[i];
        cd row_k{}, row_g{};
        double row_abs = 0.0;
        for (int j = 0; j < 15; ++j) {
            const cd v = f(x, ys[j]);
            row_k += kRule.wk[j] * v;
            row_g += kRule.wg[j] * v;
            row_abs += kRule.wk[j] * std::abs(v);
        }
        kk += kRule.wk[i] * row_k;
        gk += kRule.wg[i] * row_k;
        kg += kRule.wk[i] * row_g;
        abs_sum += kRule.wk[i] * row_abs;
    }
    const double area = hx * hy;
    Cell c{x0, x1, y0, y1, kk * area, std::abs((kk - gk) * area), std::abs((kk - kg) * area), abs_sum * area};
    const double floor = 50.0 * kEps * c.abs_value;
    c.err_x = std::max(c.err_x, 0.5 * floor);
    c.err_y = std::max(c.err_y, 0.5 * floor);
    if (!std::isfinite(std::abs(c.value))) c.err_x = std::numeric_limits<double>::infinity();
    return c;
}

std::vector<double> edges_from(double lo, double hi, std::span<const double> breaks) {
    std::vector<double> e{lo};
    for (double b : breaks) {
        if (b > e.back() && b < hi) e.push_back(b);
    }
    e.push_back(hi);
    return e;
}

}  // namespace

QuadratureResult integrate_rectangle_2d(const Kernel2d& f, double x0, double x1, double y0, double y1,
                                        const QuadratureConfig& cfg, std::span<const double> x_breaks,
                                        std::span<const double> y_breaks) {
    cfg.validate();
    if (!(x1 > x0) || !(y1 > y0) || !std::isfinite(x1 - x0) || !std::isfinite(y1 - y0)) {
        throw DomainError("rectangle must have finite positive extent");
    }
    const auto xe = edges_from(x0, x1, x_breaks);
    const auto ye = edges_from(y0, y1, y_breaks);

    std::priority_queue<Cell, std::vector<Cell>, CellByError> heap;
    std::vector<Cell> frozen;
    cd total{};
    double total_err = 0.0;
    double total_abs = 0.0;
    for (std::size_t i = 0; i + 1 < xe.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ye.size(); ++j) {
            Cell c = gk15_2d(f, xe[i], xe[i + 1], ye[j], ye[j + 1]);
            total += c.value;
            total_err += c.error();
            total_abs += c.abs_value;
            heap.push(c);
        }
    }
    std::size_t count = heap.size();
    auto target = [&] { return accept_level(cfg, total, total_abs); };

    while (!heap.empty() && total_err > target()) {
        if (count >= cfg.max_subdivisions) {
            throw NumericalError("2-D quadrature: subdivision limit reached", total, total_err);
        }
        Cell w = heap.top();
        heap.pop();
        const bool split_x = w.err_x >= w.err_y;
        const double lo = split_x ? w.x0 : w.y0;
        const double hi = split_x ? w.x1 : w.y1;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi) || (hi - lo) < 1e3 * kEps * std::max(std::abs(lo), std::abs(hi))) {
            frozen.push_back(w);
            continue;
        }
        Cell a = split_x ? gk15_2d(f, w.x0, mid, w.y0, w.y1) : gk15_2d(f, w.x0, w.x1, w.y0, mid);
        Cell b = split_x ? gk15_2d(f, mid, w.x1, w.y0, w.y1) : gk15_2d(f, w.x0, w.x1, mid, w.y1);
        total += a.value + b.value - w.value;
        total_err += a.error() + b.error() - w.error();
        total_abs += a.abs_value + b.abs_value - w.abs_value;
        heap.push(a);
        heap.push(b);
        ++count;
    }

    std::vector<Cell> cells = std::move(frozen);
    while (!heap.empty()) {
        cells.push_back(heap.top());
        heap.pop();
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return a.x0 != b.x0 ? a.x0 < b.x0 : a.y0 < b.y0;
    });
    QuadratureResult r;
    for (const auto& c : cells) {
        r.value += c.value;
        r.error += c.error();
        r.abs_value += c.abs_value;
    }
    r.subdivisions = count;
    if (!(r.error <= accept_level(cfg, r.value, r.abs_value))) {
        throw NumericalError("2-D quadrature: tolerance not reached", r.value, r.error);
    }
    return r;
}

namespace {

std::vector<double> uniform_breaks(double lo, double hi, double max_width) {
    std::vector<double> b;
    if (!(max_width > 0.0) || !std::isfinite(max_width)) return b;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / max_width));
    for (std::size_t i = 1; i < n; ++i) b.push_back(lo + (hi - lo) * static_cast<double>(i) / n);
    return b;
}

}  // namespace

QuadratureResult integrate_square_2d(const Kernel2d& kernel, double delta_t, const QuadratureConfig& cfg,
                                     const SquareOptions& opts) {
    if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw DomainError("delta_t must be positive and finite");
    const double period = opts.oscillation_scale > 0.0 ? 2.0 * std::numbers::pi / opts.oscillation_scale
                                                       : std::numeric_limits<double>::infinity();

    if (!opts.diagonal_split) {
        const auto breaks = uniform_breaks(0.0, delta_t, period);
        return integrate_rectangle_2d(kernel, 0.0, delta_t, 0.0, delta_t, cfg, breaks, breaks);
    }

    // Triangle t1 < t2 in coordinates (tau, v): t1 = v (T - tau), t2 = t1 + tau.
    // The diagonal becomes the edge tau = 0; the Jacobian is T - tau.
    std::vector<double> tau_breaks;
    if (opts.diagonal_feature_scale > 0.0) {
        for (double s = opts.diagonal_feature_scale; s < delta_t; s *= 2.0) tau_breaks.push_back(s);
    }
    {
        std::vector<double> merged{0.0};
        auto graded = tau_breaks;
        graded.push_back(delta_t);
        for (double next : graded) {
            const double lo = merged.back();
            for (double b : uniform_breaks(lo, next, period)) merged.push_back(b);
            if (next < delta_t) merged.push_back(next);
        }
        merged.erase(merged.begin());
        tau_breaks = std::move(merged);
    }
    // v spans s in [0, T - tau]; relative phase in s is bounded by two frequencies.
    const auto v_breaks = uniform_breaks(0.0, 1.0, period / (2.0 * delta_t));

    const double T = delta_t;
    Kernel2d upper = [&](double tau, double v) {
        const double t1 = v * (T - tau);
        return kernel(t1, t1 + tau) * (T - tau);
    };
    Kernel2d lower = [&](double tau, double v) {
        const double t2 = v * (T - tau);
        return kernel(t2 + tau, t2) * (T - tau);
    };
    auto both = [&](const QuadratureConfig& c) {
        QuadratureResult a = integrate_rectangle_2d(upper, 0.0, T, 0.0, 1.0, c, tau_breaks, v_breaks);
        QuadratureResult b = integrate_rectangle_2d(lower, 0.0, T, 0.0, 1.0, c, tau_breaks, v_breaks);
        QuadratureResult r;
        r.value = a.value + b.value;
        r.error = a.error + b.error;
        r.abs_value = a.abs_value + b.abs_value;
        r.subdivisions = a.subdivisions + b.subdivisions;
        return r;
    };
    QuadratureConfig half = cfg;
    half.abs_tol = 0.5 * cfg.abs_tol;
    QuadratureResult r = both(half);
    const double level = accept_level(cfg, r.value, r.abs_value);
    if (r.error <= level) return r;

    // The triangles cancel: rerun each against an absolute target set by the sum.
    half.abs_tol = 0.5 * level;
    half.rel_tol = 10.0 * kEps;
    r = both(half);
    if (!(r.error <= accept_level(cfg, r.value, r.abs_value))) {
        throw NumericalError("2-D quadrature: tolerance not reached on split square", r.value, r.error);
    }
    return r;
}

}  // namespace cgbath::quad
