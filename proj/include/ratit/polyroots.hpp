#ifndef RATIT_POLYROOTS_HPP_
#define RATIT_POLYROOTS_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ratit/sequence.hpp"

namespace ratit {

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, std::vector<int> failed)
        : std::runtime_error(what), failed_ranks(std::move(failed)) {}
    std::vector<int> failed_ranks;
};

/// Monic real polynomial z^p + b_{p-1} z^{p-1} + ... + b_0. Coefficients are
/// stored ascending (b_0 first, leading 1 last) and normalised at
/// construction. b_0 must be nonzero: zero roots have to be deflated by the
/// caller first.
class Polynomial {
public:
    explicit Polynomial(std::vector<double> ascending_coefficients);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    double operator()(double z) const;

private:
    std::vector<double> coeffs_;  // size degree+1, back() == 1
};

struct RecurrentSeries {
    Polynomial source;
    RealSequence values;        // may carry a power-of-two rescale; the
                                // recurrence and all ratio quantities are
                                // invariant under it
    std::vector<double> seeds;  // seeds as used (before any rescale)
};

struct RootEstimate {
    double value;
    int modulus_rank;
    double residual;
    bool converged;  // false when the ratio tail failed the 10% stability check
};

struct RootProducts {
    RealSequence ratios;        // offset = the n of the first retained ratio
    std::vector<long> skipped;  // n values whose denominator determinant was zero
};

/// Generates s_0..s_n with s_{k+p} = -(b_{p-1} s_{k+p-1} + ... + b_0 s_k).
/// Passing an empty seed list selects the default (0, ..., 0, 1). When the
/// magnitude leaves [1e-150, 1e150] the whole series is rescaled by a power
/// of two, which preserves the recurrence exactly.
RecurrentSeries bernoulli_sequence(const Polynomial& p, std::vector<double> seeds, int n);

/// Largest-modulus root from the term ratios s_{n+1}/s_n; with accelerate the
/// ratio sequence is delta-squared transformed first.
RootEstimate dominant_root(const RecurrentSeries& series, bool accelerate);

/// j-by-j Hankel determinant with entries s_{i+row+col}, by partial-pivoted
/// elimination.
double hankel_det(const RealSequence& s, long i, int j);

/// Hankel-determinant quotients H_m^{n-m+2} / H_m^{n-m+1} for increasing n;
/// converges to the product of the m largest-modulus roots.
RootProducts root_products(const RecurrentSeries& series, int m);

/// All p roots via successive Hankel product limits P_m and quotients
/// z_m = P_m / P_{m-1}, sorted by descending modulus. Requires real roots of
/// distinct moduli; failure surfaces as NonConvergenceError.
std::vector<RootEstimate> all_roots(const Polynomial& p, int n, bool accelerate = true);

/// Bernoulli's original form: smallest-modulus solution of
/// 1 = a_1 x + ... + a_p x^p from the ratio u_n / u_{n+1}.
RootEstimate smallest_root_bernoulli(const std::vector<double>& a, int n);

namespace detail {
/// Picks the estimate from a converging-then-noisy sequence: earliest index
/// whose local relative flatness is within a factor 4 of the best (with a
/// 1e-9 floor). Returns the index; *stability gets the worst neighbour
/// deviation relative to the picked value.
std::size_t plateau_pick(const std::vector<double>& a, double* stability);
}  // namespace detail

}  // namespace ratit

#endif
