#include "ratit/lemaitre.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ratit/fixpoint.hpp"

namespace ratit {

namespace {

// Safeguarded Newton on a bracketed increasing function, to 1e-12 absolute.
template <typename F, typename DF>
double bracketed_newton(F f, DF df, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw std::runtime_error("bracketed_newton: root not bracketed");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        const double d = df(x);
        double xn = d != 0.0 ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 1e-12) return xn;
        x = xn;
    }
    return x;
}

}  // namespace

GridFunction::GridFunction(double x_lo_, double x_hi_, double h_, std::vector<double> values_)
    : x_lo(x_lo_), x_hi(x_hi_), h(h_), values(std::move(values_)) {
    if (!(h > 0.0)) throw std::invalid_argument("GridFunction: step must be positive");
    if (!(x_hi > x_lo)) throw std::invalid_argument("GridFunction: x_hi must exceed x_lo");
    const double steps = (x_hi - x_lo) / h;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, rounded))
        throw std::invalid_argument("GridFunction: (x_hi - x_lo)/h is not an integer");
    if (values.size() != static_cast<std::size_t>(rounded) + 1)
        throw std::invalid_argument("GridFunction: value count does not match the grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

bool GridFunction::same_grid(const GridFunction& other) const {
    return values.size() == other.values.size() && std::abs(x_lo - other.x_lo) <= 1e-12 &&
           std::abs(x_hi - other.x_hi) <= 1e-12 && std::abs(h - other.h) <= 1e-12;
}

double AsymptoticSeries::coefficient(int j) const {
    if (j < 2 || j > order) return 0.0;
    return coefficients[static_cast<std::size_t>(j - 2)];
}

double AsymptoticSeries::eval(double x) const {
    double acc = 0.0;
    for (int j = order; j >= 2; --j) acc = (acc + coefficient(j)) / x;
    return x + acc / x;  // acc/x = sum c_j x^{-j} after the descending Horner pass
}

double AsymptoticSeries::eval_derivative(double x) const {
    double acc = 0.0;
    for (int j = order; j >= 2; --j) acc = (acc + static_cast<double>(j) * coefficient(j)) / x;
    return 1.0 - acc / (x * x);
}

double AsymptoticSeries::tail_integral(double X) const {
    double acc = 0.0;
    for (int j = order; j >= 2; --j) acc = (acc + coefficient(j) / (j - 1.0)) / X;
    return acc;  // sum c_j X^{-(j-1)}/(j-1)
}

double isocline(double p, double x) {
    if (!(p > 0.0)) throw std::invalid_argument("isocline: p must be positive");
    if (x < 0.0) throw std::invalid_argument("isocline: x must be nonnegative");
    const double hi = x + std::max(1.0, std::cbrt(p / 2.0) + 1.0);
    auto f = [&](double y) { return 2.0 * y * y * (y - x) - p; };
    auto df = [&](double y) { return 6.0 * y * y - 4.0 * x * y; };
    return bracketed_newton(f, df, x, hi);
}

double limit_curve(double x) {
    if (x < 0.0) throw std::invalid_argument("limit_curve: x must be nonnegative");
    auto f = [&](double y) { return 2.0 * y * (y - x) * (3.0 * y - 2.0 * x) - 1.0; };
    auto df = [&](double y) { return 18.0 * y * y - 20.0 * x * y + 4.0 * x * x; };
    return bracketed_newton(f, df, x, x + 1.0);
}

GridFunction initial_grid(double x_lo, double x_hi, double h) {
    if (x_lo < 0.0) throw std::invalid_argument("initial_grid: x_lo must be nonnegative");
    const double steps = std::round((x_hi - x_lo) / h);
    const long n = static_cast<long>(steps) + 1;
    std::vector<double> vals(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 256)
#endif
    for (long k = 0; k < n; ++k)
        vals[static_cast<std::size_t>(k)] = limit_curve(x_lo + static_cast<double>(k) * h);
    return GridFunction(x_lo, x_hi, h, std::move(vals));
}

GridFunction picard_differential(const GridFunction& y1) {
    const std::size_t n = y1.size();
    if (n < 3) throw std::invalid_argument("picard_differential: need at least 3 nodes");
    for (double v : y1.values)
        if (!(v > 0.0)) throw std::domain_error("picard_differential: nonpositive y1 value");

    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = 1.0 / y1.values[k];

    const double h = y1.h;
    std::vector<double> out(n);
    out[0] = y1.x_at(0) - 0.5 * (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
    for (std::size_t k = 1; k + 1 < n; ++k)
        out[k] = y1.x_at(k) - 0.5 * (w[k + 1] - w[k - 1]) / (2.0 * h);
    out[n - 1] = y1.x_at(n - 1) - 0.5 * (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
    return GridFunction(y1.x_lo, y1.x_hi, y1.h, std::move(out));
}

GridFunction picard_integral(const GridFunction& y1, const AsymptoticSeries& series) {
    const std::size_t n = y1.size();
    const std::size_t N = n - 1;  // interval count
    if (n < 3 || N % 2 != 0)
        throw std::invalid_argument("picard_integral: Simpson needs an even interval count");
    if (series.order < 2) throw std::invalid_argument("picard_integral: series order must be >= 2");

    const double h = y1.h;
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = y1.values[k] - y1.x_at(k);

    // int_{x_k}^{x_hi} g dt: composite Simpson; an odd leading interval is
    // handled by the 3-point edge rule, keeping O(h^4) overall.
    auto integral_from = [&](std::size_t k) {
        double acc = 0.0;
        std::size_t kk = k;
        if ((N - kk) % 2 == 1) {
            if (kk + 2 <= N)
                acc += h / 12.0 * (5.0 * g[kk] + 8.0 * g[kk + 1] - g[kk + 2]);
            else
                acc += h / 12.0 * (-g[kk - 1] + 8.0 * g[kk] + 5.0 * g[kk + 1]);
            ++kk;
        }
        for (std::size_t a = kk; a + 2 <= N; a += 2)
            acc += h / 3.0 * (g[a] + 4.0 * g[a + 1] + g[a + 2]);
        return acc;
    };

    const double tail = series.tail_integral(y1.x_hi);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double inv = 2.0 * (integral_from(k) + tail);
        if (!(inv > 0.0))
            throw std::domain_error("picard_integral: nonpositive 1/y2 at x = " +
                                    std::to_string(y1.x_at(k)));
        out[k] = 1.0 / inv;
    }
    return GridFunction(y1.x_lo, y1.x_hi, y1.h, std::move(out));
}

GridRational rational_iteration_grid(const GridFunction& y0, const GridFunction& y1,
                                     const GridFunction& y2, double degenerate_tol) {
    if (!y0.same_grid(y1) || !y1.same_grid(y2))
        throw std::invalid_argument("rational_iteration_grid: grid mismatch");
    const long n = static_cast<long>(y1.size());
    std::vector<double> out(static_cast<std::size_t>(n));
    std::vector<unsigned char> flags(static_cast<std::size_t>(n), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
    for (long k = 0; k < n; ++k) {
        bool deg = false;
        const std::size_t i = static_cast<std::size_t>(k);
        out[i] = detail::delta2_triple(y0.values[i], y1.values[i], y2.values[i], degenerate_tol, &deg);
        flags[i] = deg ? 1 : 0;
    }
    std::vector<std::size_t> degenerate;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        if (flags[i]) degenerate.push_back(i);
    return GridRational{GridFunction(y1.x_lo, y1.x_hi, y1.h, std::move(out)), std::move(degenerate)};
}

AsymptoticSeries asymptotic_series(int order) {
    if (order < 2 || order > 12)
        throw std::invalid_argument("asymptotic_series: order must lie in [2, 12]");
    // c[j] for j = 0..order (c_0, c_1 unused). Matching the coefficient of
    // x^{-s} in 1 + u' = 2x^2 u + 4x u^2 + 2u^3 with u = sum c_j x^{-j}:
    //   2 c_{s+2} + 4 (c*c)_{s+1} + 2 (c*c*c)_s = [s == 0] - (s-1) c_{s-1}.
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    for (int s = 0; s + 2 <= order; ++s) {
        double lhs = (s == 0) ? 1.0 : 0.0;
        if (s >= 3) lhs -= (s - 1.0) * c[static_cast<std::size_t>(s - 1)];
        double cc = 0.0;  // (c*c)_{s+1}
        for (int i = 2; i <= s - 1; ++i) {
            const int j = s + 1 - i;
            if (j >= 2) cc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)];
        }
        double ccc = 0.0;  // (c*c*c)_s
        for (int i = 2; i <= s - 4; ++i)
            for (int j = 2; j <= s - i - 2; ++j) {
                const int k = s - i - j;
                if (k >= 2)
                    ccc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)] *
                           c[static_cast<std::size_t>(k)];
            }
        c[static_cast<std::size_t>(s + 2)] = 0.5 * (lhs - 4.0 * cc - 2.0 * ccc);
    }
    AsymptoticSeries out;
    out.order = order;
    out.coefficients.assign(c.begin() + 2, c.end());
    return out;
}

double separatrix_y0(double x_star, double rtol, double atol) {
    if (x_star < 1.0) throw std::invalid_argument("separatrix_y0: x_star must be >= 1");
    IvpProblem prob{lemaitre_rhs, x_star, x_star, 0.0};
    Trajectory traj = rkf45_integrate(prob, rtol, atol);
    if (traj.terminated_by() != Termination::reached_end)
        throw std::runtime_error("separatrix_y0: integration failed (" + traj.note() + ")");
    return traj.y_last();
}

SeparatrixClassification classify_forward(double y0_val, double x_max) {
    if (!(y0_val > 0.0)) throw std::invalid_argument("classify_forward: y0 must be positive");
    if (!(x_max > 0.0)) throw std::invalid_argument("classify_forward: x_max must be positive");
    std::vector<EventSpec> events;
    events.push_back(EventSpec{[](double x, double y) { return lemaitre_rhs(x, y) - 1.0; },
                               EventSpec::Direction::up, "exits_above"});
    events.push_back(EventSpec{[](double x, double y) { return y - x; },
                               EventSpec::Direction::down, "crosses_isocline0"});
    IvpProblem prob{lemaitre_rhs, 0.0, y0_val, x_max};
    Trajectory traj = rkf45_integrate(prob, 1e-12, 1e-14, events);
    using Outcome = SeparatrixClassification::Outcome;
    switch (traj.terminated_by()) {
        case Termination::event:
            return SeparatrixClassification{traj.event_name() == "exits_above"
                                                ? Outcome::exits_above
                                                : Outcome::crosses_isocline0,
                                            traj.x_last()};
        case Termination::step_failure:
            // Solutions above the anti-funnel blow up in finite time.
            return SeparatrixClassification{Outcome::exits_above, traj.x_last()};
        case Termination::reached_end:
        default:
            return SeparatrixClassification{Outcome::stays_in_antifunnel, std::nullopt};
    }
}

std::vector<ReplicateRow> replicate_table(double h, double x_hi, int series_order, int sweeps) {
    if (sweeps < 1) throw std::invalid_argument("replicate_table: sweeps must be >= 1");
    const AsymptoticSeries series = asymptotic_series(series_order);
    const GridFunction y1 = initial_grid(0.0, x_hi, h);
    const GridFunction y0 = picard_differential(y1);
    const GridFunction y2 = picard_integral(y1, series);

    // The Picard pair is built on 1/y (both operators are phrased in it), so
    // the pointwise rational step is applied to the reciprocal grids and the
    // result inverted. Applying it to the y grids directly loses the factor
    // ~1000 of error reduction at x = 0.
    auto reciprocal = [](const GridFunction& g) {
        std::vector<double> w(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!(g.values[k] > 0.0))
                throw std::domain_error("replicate_table: nonpositive grid value");
            w[k] = 1.0 / g.values[k];
        }
        return GridFunction(g.x_lo, g.x_hi, g.h, std::move(w));
    };

    GridRational rat = rational_iteration_grid(reciprocal(y0), reciprocal(y1), reciprocal(y2));
    GridFunction y_rational = reciprocal(rat.values);
    for (int sweep = 1; sweep < sweeps; ++sweep) {
        const GridFunction yd = picard_differential(y_rational);
        const GridFunction yi = picard_integral(y_rational, series);
        rat = rational_iteration_grid(reciprocal(yd), reciprocal(y_rational), reciprocal(yi));
        y_rational = reciprocal(rat.values);
    }

    const double x_star = std::max(10.0, x_hi);
    IvpProblem prob{lemaitre_rhs, x_star, x_star, 0.0};
    Trajectory ref = rkf45_integrate(prob, 1e-12, 1e-14);
    if (ref.terminated_by() != Termination::reached_end)
        throw std::runtime_error("replicate_table: reference integration failed");

    std::vector<ReplicateRow> rows(y1.size());
    std::vector<unsigned char> deg(y1.size(), 0);
    for (std::size_t i : rat.degenerate_nodes) deg[i] = 1;
    for (std::size_t k = 0; k < y1.size(); ++k) {
        const double x = y1.x_at(k);
        rows[k] = ReplicateRow{x,
                               y1.values[k],
                               y0.values[k],
                               y2.values[k],
                               y_rational.values[k],
                               ref.dense_eval(x),
                               deg[k] != 0};
    }
    return rows;
}

}  // namespace ratit
