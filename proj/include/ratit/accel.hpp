#ifndef RATIT_ACCEL_HPP_
#define RATIT_ACCEL_HPP_

#include <cstddef>
#include <vector>

#include "ratit/sequence.hpp"

namespace ratit {

/// Shared relative tolerance for the degenerate-denominator fallback of the
/// delta-squared transform. The test is
///   |s_n - 2 s_{n+1} + s_{n+2}| <= tol * (|s_n| + |s_{n+1}| + |s_{n+2}| + 1)
/// with a +1 absolute floor so sequences near zero are handled sensibly.
inline constexpr double kDegenerateTol = 1e-13;

struct AitkenResult {
    RealSequence transformed;
    std::vector<std::size_t> degenerate_indices;  // 0-based into transformed
};

/// Triangular table of repeated delta-squared transforms. rows[0] is the
/// input; rows[k] has rows[0].size() - 2k elements. degenerate[k] lists the
/// fallback positions inside rows[k] (degenerate[0] is always empty).
struct AitkenTable {
    std::vector<RealSequence> rows;
    std::vector<std::vector<std::size_t>> degenerate;
};

struct AccelerationReport {
    RealSequence errors;
    std::vector<double> ratios;  // e_{n+1}/e_n wherever e_n > 0; may be empty
    double estimated_order;     // NaN when fewer than two usable error pairs
};

/// k-th forward difference; output keeps the input offset and loses k terms.
RealSequence forward_difference(const RealSequence& s, int order = 1);

/// Aitken delta-squared transform of a sequence of length >= 3. Where the
/// second difference is degenerate the newest iterate s_{n+2} is kept and the
/// position recorded.
AitkenResult aitken_delta2(const RealSequence& s, double degenerate_tol = kDegenerateTol);

/// Repeated delta-squared transform: depth+1 rows, needs length >= 2*depth+1.
AitkenTable iterated_aitken(const RealSequence& s, int depth,
                            double degenerate_tol = kDegenerateTol);

/// Error/ratio diagnostics of a sequence against a known limit. The order
/// estimate is the least-squares slope of log e_{n+1} against log e_n over
/// the tail half of the usable pairs.
AccelerationReport acceleration_report(const RealSequence& s, double limit);

namespace detail {
/// One delta-squared step on the triple (a, b, c) = (s_n, s_{n+1}, s_{n+2}),
/// evaluated in the cancellation-safe form c - (c-b)^2 / (a - 2b + c).
/// Sets *degenerate and returns c when the denominator is below tolerance.
double delta2_triple(double a, double b, double c, double tol, bool* degenerate);
}  // namespace detail

}  // namespace ratit

#endif
