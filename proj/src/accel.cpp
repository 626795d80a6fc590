#include "ratit/accel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ratit {

namespace detail {

double delta2_triple(double a, double b, double c, double tol, bool* degenerate) {
    const double den = (a - 2.0 * b) + c;
    if (std::abs(den) <= tol * (std::abs(a) + std::abs(b) + std::abs(c) + 1.0)) {
        if (degenerate) *degenerate = true;
        return c;
    }
    if (degenerate) *degenerate = false;
    const double d = c - b;
    return c - d * d / den;
}

}  // namespace detail

RealSequence forward_difference(const RealSequence& s, int order) {
    if (order < 1)
        throw std::invalid_argument("forward_difference: order must be positive");
    if (s.size() <= static_cast<std::size_t>(order))
        throw LengthError("forward_difference: need at least order+1 values");
    std::vector<double> cur = s.values();
    for (int k = 0; k < order; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i)
            next[i] = cur[i + 1] - cur[i];
        cur = std::move(next);
    }
    return RealSequence(std::move(cur), s.offset());
}

AitkenResult aitken_delta2(const RealSequence& s, double degenerate_tol) {
    if (s.size() < 3)
        throw LengthError("aitken_delta2: need at least 3 values");
    const std::size_t m = s.size() - 2;
    std::vector<double> out(m);
    std::vector<unsigned char> flags(m, 0);
    const std::vector<double>& v = s.values();
    const long n = static_cast<long>(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
    for (long i = 0; i < n; ++i) {
        bool deg = false;
        out[static_cast<std::size_t>(i)] = detail::delta2_triple(
            v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i) + 1],
            v[static_cast<std::size_t>(i) + 2], degenerate_tol, &deg);
        flags[static_cast<std::size_t>(i)] = deg ? 1 : 0;
    }
    std::vector<std::size_t> degenerate;
    for (std::size_t i = 0; i < m; ++i)
        if (flags[i]) degenerate.push_back(i);
    return AitkenResult{RealSequence(std::move(out), s.offset()), std::move(degenerate)};
}

AitkenTable iterated_aitken(const RealSequence& s, int depth, double degenerate_tol) {
    if (depth < 0)
        throw std::invalid_argument("iterated_aitken: depth must be >= 0");
    if (s.size() < static_cast<std::size_t>(2 * depth + 1))
        throw LengthError("iterated_aitken: need at least 2*depth+1 values");
    AitkenTable table;
    table.rows.push_back(s);
    table.degenerate.emplace_back();
    for (int k = 0; k < depth; ++k) {
        AitkenResult r = aitken_delta2(table.rows.back(), degenerate_tol);
        table.rows.push_back(std::move(r.transformed));
        table.degenerate.push_back(std::move(r.degenerate_indices));
    }
    return table;
}

AccelerationReport acceleration_report(const RealSequence& s, double limit) {
    if (s.size() < 3)
        throw LengthError("acceleration_report: need at least 3 values");
    std::vector<double> errs(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        errs[i] = std::abs(s[i] - limit);

    std::vector<double> ratios;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
        if (errs[i] > 0.0) ratios.push_back(errs[i + 1] / errs[i]);

    // Pairs (log e_n, log e_{n+1}) need both errors positive; the slope is
    // fitted over the tail half to skip the pre-asymptotic regime.
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i)
        if (errs[i] > 0.0 && errs[i + 1] > 0.0)
            pairs.emplace_back(std::log(errs[i]), std::log(errs[i + 1]));

    double order = std::numeric_limits<double>::quiet_NaN();
    if (pairs.size() >= 2) {
        const std::size_t keep = std::max<std::size_t>(2, (pairs.size() + 1) / 2);
        const std::size_t start = pairs.size() - keep;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(keep);
        for (std::size_t i = start; i < pairs.size(); ++i) {
            sx += pairs[i].first;
            sy += pairs[i].second;
            sxx += pairs[i].first * pairs[i].first;
            sxy += pairs[i].first * pairs[i].second;
        }
        const double den = n * sxx - sx * sx;
        if (den != 0.0) order = (n * sxy - sx * sy) / den;
    }
    return AccelerationReport{RealSequence(std::move(errs), s.offset()), std::move(ratios), order};
}

}  // namespace ratit
