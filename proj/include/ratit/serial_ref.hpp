#ifndef RATIT_SERIAL_REF_HPP_
#define RATIT_SERIAL_REF_HPP_

#include <vector>

#include "ratit/polyroots.hpp"
#include "ratit/sequence.hpp"

namespace ratit::serial {

// Plain-loop reference implementations of the kernels that carry OpenMP
// pragmas in the library proper. Tests assert bitwise agreement with the
// parallel versions; the benchmark tool times both.

/// Delta-squared transform, serial loop.
std::vector<double> aitken_delta2(const std::vector<double>& s, double degenerate_tol);

/// Pointwise rational iteration of three equal-length vectors.
std::vector<double> rational_iteration_pointwise(const std::vector<double>& y0,
                                                 const std::vector<double>& y1,
                                                 const std::vector<double>& y2,
                                                 double degenerate_tol);

/// Limit-curve samples on x_lo + k*h, k = 0..n-1.
std::vector<double> limit_curve_samples(double x_lo, double h, std::size_t n);

/// Hankel quotients H_m^{n-m+2}/H_m^{n-m+1} (zero denominators skipped).
std::vector<double> hankel_ratio_sequence(const RealSequence& s, int m);

}  // namespace ratit::serial

#endif
