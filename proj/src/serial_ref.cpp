#include "ratit/serial_ref.hpp"

#include "ratit/accel.hpp"
#include "ratit/lemaitre.hpp"

namespace ratit::serial {

std::vector<double> aitken_delta2(const std::vector<double>& s, double degenerate_tol) {
    std::vector<double> out(s.size() - 2);
    for (std::size_t i = 0; i + 2 < s.size(); ++i)
        out[i] = ratit::detail::delta2_triple(s[i], s[i + 1], s[i + 2], degenerate_tol, nullptr);
    return out;
}

std::vector<double> rational_iteration_pointwise(const std::vector<double>& y0,
                                                 const std::vector<double>& y1,
                                                 const std::vector<double>& y2,
                                                 double degenerate_tol) {
    std::vector<double> out(y1.size());
    for (std::size_t i = 0; i < y1.size(); ++i)
        out[i] = ratit::detail::delta2_triple(y0[i], y1[i], y2[i], degenerate_tol, nullptr);
    return out;
}

std::vector<double> limit_curve_samples(double x_lo, double h, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = ratit::limit_curve(x_lo + static_cast<double>(k) * h);
    return out;
}

std::vector<double> hankel_ratio_sequence(const RealSequence& s, int m) {
    const long N = s.last_index();
    std::vector<double> out;
    for (long n = m - 1; n <= N - m; ++n) {
        const double den = hankel_det(s, n - m + 1, m);
        if (den == 0.0) continue;
        const double r = hankel_det(s, n - m + 2, m) / den;
        if (std::isfinite(r)) out.push_back(r);
    }
    return out;
}

}  // namespace ratit::serial
