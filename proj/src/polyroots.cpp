#include "ratit/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ratit/accel.hpp"

namespace ratit {

Polynomial::Polynomial(std::vector<double> ascending_coefficients)
    : coeffs_(std::move(ascending_coefficients)) {
    if (coeffs_.size() < 2)
        throw std::invalid_argument("Polynomial: degree must be at least 1");
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw std::invalid_argument("Polynomial: non-finite coefficient");
    const double lead = coeffs_.back();
    if (lead == 0.0)
        throw std::invalid_argument("Polynomial: leading coefficient must be nonzero");
    if (lead != 1.0)
        for (double& c : coeffs_) c /= lead;
    if (coeffs_.front() == 0.0)
        throw std::invalid_argument("Polynomial: b_0 must be nonzero (deflate zero roots first)");
}

double Polynomial::operator()(double z) const {
    double v = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * z + coeffs_[k];
    return v;
}

RecurrentSeries bernoulli_sequence(const Polynomial& p, std::vector<double> seeds, int n) {
    const int deg = p.degree();
    if (seeds.empty()) {
        seeds.assign(static_cast<std::size_t>(deg), 0.0);
        seeds.back() = 1.0;
    }
    if (static_cast<int>(seeds.size()) != deg)
        throw std::invalid_argument("bernoulli_sequence: need exactly degree seeds");
    if (n < deg)
        throw std::invalid_argument("bernoulli_sequence: n must be at least the degree");
    bool all_zero = true;
    for (double s : seeds) {
        if (!std::isfinite(s)) throw std::invalid_argument("bernoulli_sequence: non-finite seed");
        if (s != 0.0) all_zero = false;
    }
    if (all_zero) throw std::invalid_argument("bernoulli_sequence: seeds must not all be zero");

    const std::vector<double>& b = p.coefficients();
    std::vector<double> s = seeds;
    s.reserve(static_cast<std::size_t>(n) + 1);
    while (s.size() <= static_cast<std::size_t>(n)) {
        double acc = 0.0;
        const std::size_t base = s.size() - static_cast<std::size_t>(deg);
        for (int j = 0; j < deg; ++j) acc += b[static_cast<std::size_t>(j)] * s[base + static_cast<std::size_t>(j)];
        const double next = -acc;
        if (!std::isfinite(next))
            throw std::overflow_error("bernoulli_sequence: series overflowed the representable range");
        s.push_back(next);
        double mx = 0.0;
        for (double v : s) mx = std::max(mx, std::abs(v));
        if (mx > 1e150 || (mx > 0.0 && mx < 1e-150)) {
            // Rescale the whole prefix by a power of two; the homogeneous
            // recurrence and every Hankel-quotient downstream are invariant.
            const double scale = std::exp2(-std::floor(std::log2(mx)));
            for (double& v : s) v *= scale;
        }
    }
    return RecurrentSeries{p, RealSequence(std::move(s), 0), std::move(seeds)};
}

namespace detail {

std::size_t plateau_pick(const std::vector<double>& a, double* stability) {
    const std::size_t n = a.size();
    std::size_t pick = n - 1;
    if (n >= 3) {
        std::vector<double> rel(n - 2);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double flat = std::abs(a[i] - a[i - 1]) + std::abs(a[i + 1] - a[i]);
            rel[i - 1] = flat / (std::abs(a[i]) + 1e-300);
            best = std::min(best, rel[i - 1]);
        }
        const double thr = std::max(4.0 * best, 1e-9);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (rel[i - 1] <= thr) {
                pick = i;
                break;
            }
        }
        if (pick == n - 1) pick = n - 2;  // no qualifying index; fall back to latest interior
    }
    if (stability) {
        double worst = 0.0;
        const std::size_t lo = pick > 0 ? pick - 1 : 0;
        const std::size_t hi = std::min(n - 1, pick + 1);
        for (std::size_t j = lo; j <= hi; ++j) worst = std::max(worst, std::abs(a[j] - a[pick]));
        *stability = worst / std::max(std::abs(a[pick]), 1e-300);
    }
    return pick;
}

namespace {

// Ratio sequence t_n = s_{n+1}/s_n over the longest zero-free tail.
std::vector<double> tail_ratios(const RealSequence& s) {
    const std::vector<double>& v = s.values();
    std::size_t lo = v.size() - 1;  // first index of the zero-free tail
    while (lo > 0 && v[lo - 1] != 0.0) --lo;
    std::vector<double> t;
    for (std::size_t i = lo; i + 1 < v.size(); ++i) t.push_back(v[i + 1] / v[i]);
    return t;
}

double stability_of_last_three(const std::vector<double>& t) {
    if (t.size() < 3) return 0.0;
    const double a = t[t.size() - 3], b = t[t.size() - 2], c = t[t.size() - 1];
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
    return (std::max({a, b, c}) - std::min({a, b, c})) / scale;
}

}  // namespace
}  // namespace detail

RootEstimate dominant_root(const RecurrentSeries& series, bool accelerate) {
    if (series.values.size() < 5)
        throw LengthError("dominant_root: need at least 5 series values");
    std::vector<double> t = detail::tail_ratios(series.values);
    if (t.size() < 3)
        throw std::domain_error("dominant_root: zero values in the series tail leave too few ratios");
    std::vector<double> used = t;
    if (accelerate) {
        AitkenResult ar = aitken_delta2(RealSequence(t, 0));
        used = ar.transformed.values();
    }
    const double value = used.back();
    const bool converged = detail::stability_of_last_three(used) <= 0.10;
    return RootEstimate{value, 1, std::abs(series.source(value)), converged};
}

double hankel_det(const RealSequence& s, long i, int j) {
    if (j < 1) throw std::invalid_argument("hankel_det: j must be positive");
    if (i < s.first_index() || i + 2 * static_cast<long>(j) - 2 > s.last_index())
        throw IndexError("hankel_det: window [i, i+2j-2] outside the sequence");
    if (j == 1) return s.at_index(i);

    const std::size_t m = static_cast<std::size_t>(j);
    std::vector<double> M(m * m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
            M[r * m + c] = s.at_index(i + static_cast<long>(r + c));

    double det = 1.0;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(M[r * m + col]) > std::abs(M[piv * m + col])) piv = r;
        if (M[piv * m + col] == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t c = col; c < m; ++c) std::swap(M[piv * m + c], M[col * m + c]);
            det = -det;
        }
        const double pivot = M[col * m + col];
        det *= pivot;
        for (std::size_t r = col + 1; r < m; ++r) {
            const double f = M[r * m + col] / pivot;
            for (std::size_t c = col + 1; c < m; ++c) M[r * m + c] -= f * M[col * m + c];
        }
    }
    return det;
}

RootProducts root_products(const RecurrentSeries& series, int m) {
    const int p = series.source.degree();
    if (m < 1 || m > p)
        throw std::invalid_argument("root_products: m must lie in [1, degree]");
    const RealSequence& s = series.values;
    const long N = s.last_index();
    const long n_lo = static_cast<long>(m) - 1;
    const long n_hi = N - static_cast<long>(m);
    if (n_hi - n_lo + 1 < 3)
        throw LengthError("root_products: series too short for 3 ratio values");

    const long count = n_hi - n_lo + 1;
    std::vector<double> num(static_cast<std::size_t>(count)), den(static_cast<std::size_t>(count));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (count > 256)
#endif
    for (long k = 0; k < count; ++k) {
        const long n = n_lo + k;
        den[static_cast<std::size_t>(k)] = hankel_det(s, n - m + 1, m);
        num[static_cast<std::size_t>(k)] = hankel_det(s, n - m + 2, m);
    }

    std::vector<double> ratios;
    std::vector<long> skipped;
    long first_n = -1;
    for (long k = 0; k < count; ++k) {
        const long n = n_lo + k;
        if (den[static_cast<std::size_t>(k)] == 0.0) {
            skipped.push_back(n);
            continue;
        }
        const double r = num[static_cast<std::size_t>(k)] / den[static_cast<std::size_t>(k)];
        if (!std::isfinite(r)) {
            skipped.push_back(n);
            continue;
        }
        if (ratios.empty()) first_n = n;
        ratios.push_back(r);
    }
    if (ratios.size() < 3)
        throw std::domain_error("root_products: fewer than 3 valid ratios (m=" + std::to_string(m) + ")");
    return RootProducts{RealSequence(std::move(ratios), first_n), std::move(skipped)};
}

std::vector<RootEstimate> all_roots(const Polynomial& p, int n, bool accelerate) {
    const int deg = p.degree();
    RecurrentSeries series = bernoulli_sequence(p, {}, n);

    std::vector<double> products(static_cast<std::size_t>(deg) + 1, 1.0);
    std::vector<double> stabilities(static_cast<std::size_t>(deg) + 1, 0.0);
    std::vector<unsigned char> errored(static_cast<std::size_t>(deg) + 1, 0);
    std::vector<int> failed;

    // The m product limits are independent of each other. Exceptions are
    // converted to failure flags so none escapes the parallel region.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (deg > 3)
#endif
    for (int m = 1; m <= deg; ++m) {
        try {
            RootProducts rp = root_products(series, m);
            std::vector<double> seq = rp.ratios.values();
            if (accelerate && seq.size() >= 3) {
                AitkenResult ar = aitken_delta2(RealSequence(seq, 0));
                seq = ar.transformed.values();
            }
            double stab = 0.0;
            const std::size_t pick = detail::plateau_pick(seq, &stab);
            products[static_cast<std::size_t>(m)] = seq[pick];
            stabilities[static_cast<std::size_t>(m)] = stab;
        } catch (const std::exception&) {
            errored[static_cast<std::size_t>(m)] = 1;
        }
    }
    for (int m = 1; m <= deg; ++m)
        if (errored[static_cast<std::size_t>(m)] || stabilities[static_cast<std::size_t>(m)] > 0.10)
            failed.push_back(m);
    if (!failed.empty()) {
        std::string msg = "all_roots: product sequence unstable for m =";
        for (int m : failed) msg += " " + std::to_string(m);
        throw NonConvergenceError(msg, failed);
    }

    std::vector<RootEstimate> roots;
    roots.reserve(static_cast<std::size_t>(deg));
    for (int m = 1; m <= deg; ++m) {
        const double z = products[static_cast<std::size_t>(m)] / products[static_cast<std::size_t>(m) - 1];
        if (!std::isfinite(z)) {
            throw NonConvergenceError("all_roots: non-finite quotient at m = " + std::to_string(m) +
                                          " (moduli not distinct?)",
                                      {m});
        }
        roots.push_back(RootEstimate{z, m, std::abs(p(z)), true});
    }
    std::stable_sort(roots.begin(), roots.end(),
                     [](const RootEstimate& a, const RootEstimate& b) {
                         return std::abs(a.value) > std::abs(b.value);
                     });
    for (int m = 1; m <= deg; ++m) roots[static_cast<std::size_t>(m) - 1].modulus_rank = m;
    return roots;
}

RootEstimate smallest_root_bernoulli(const std::vector<double>& a, int n) {
    if (a.empty()) throw std::invalid_argument("smallest_root_bernoulli: empty coefficient list");
    if (a.back() == 0.0)
        throw std::invalid_argument("smallest_root_bernoulli: a_p must be nonzero");
    const int p = static_cast<int>(a.size());
    if (n < p) throw std::invalid_argument("smallest_root_bernoulli: n must be at least p");

    // u_{k+p} = a_1 u_{k+p-1} + ... + a_p u_k, i.e. the Bernoulli recurrence of
    // the reversed-coefficient monic polynomial.
    std::vector<double> u(static_cast<std::size_t>(p), 0.0);
    u.back() = 1.0;
    u.reserve(static_cast<std::size_t>(n) + 1);
    while (u.size() <= static_cast<std::size_t>(n)) {
        double acc = 0.0;
        const std::size_t base = u.size();
        for (int j = 1; j <= p; ++j) acc += a[static_cast<std::size_t>(j) - 1] * u[base - static_cast<std::size_t>(j)];
        if (!std::isfinite(acc))
            throw std::overflow_error("smallest_root_bernoulli: series overflowed");
        u.push_back(acc);
        double mx = 0.0;
        for (double v : u) mx = std::max(mx, std::abs(v));
        if (mx > 1e150) {
            const double scale = std::exp2(-std::floor(std::log2(mx)));
            for (double& v : u) v *= scale;
        }
    }

    // Ratios u_k / u_{k+1} over the zero-free tail.
    std::size_t lo = u.size() - 1;
    while (lo > 0 && u[lo - 1] != 0.0) --lo;
    std::vector<double> t;
    for (std::size_t i = lo; i + 1 < u.size(); ++i) {
        if (u[i + 1] == 0.0)
            throw std::domain_error("smallest_root_bernoulli: zero value in the series tail");
        t.push_back(u[i] / u[i + 1]);
    }
    if (t.empty()) throw std::domain_error("smallest_root_bernoulli: no usable ratios");

    const double x = t.back();
    double poly = 0.0;  // residual of 1 = a_1 x + ... + a_p x^p
    for (std::size_t j = a.size(); j-- > 0;) poly = (poly + a[j]) * x;
    const bool converged = detail::stability_of_last_three(t) <= 0.10;
    return RootEstimate{x, 1, std::abs(poly - 1.0), converged};
}

}  // namespace ratit
