#ifndef RATIT_LEMAITRE_HPP_
#define RATIT_LEMAITRE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "ratit/accel.hpp"
#include "ratit/ivp.hpp"

namespace ratit {

/// Right-hand side of the study equation y' = 2 y^2 (y - x).
inline double lemaitre_rhs(double x, double y) { return 2.0 * y * y * (y - x); }

/// Real function sampled on the uniform grid x_lo + k*h, k = 0..N.
struct GridFunction {
    GridFunction(double x_lo_, double x_hi_, double h_, std::vector<double> values_);

    double x_lo, x_hi, h;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double x_at(std::size_t k) const { return x_lo + static_cast<double>(k) * h; }
    bool same_grid(const GridFunction& other) const;
};

/// Truncated expansion y(x) ~ x + sum_{j=2}^{order} c_j x^-j.
struct AsymptoticSeries {
    std::vector<double> coefficients;  // c_2 .. c_order
    int order = 0;

    double coefficient(int j) const;       // c_j, 0 outside [2, order]
    double eval(double x) const;            // x + sum c_j x^-j
    double eval_derivative(double x) const;  // 1 - sum j c_j x^-(j+1)
    /// Closed form of int_X^inf sum c_j t^-j dt = sum c_j X^-(j-1)/(j-1).
    double tail_integral(double X) const;
};

struct SeparatrixClassification {
    enum class Outcome { stays_in_antifunnel, exits_above, crosses_isocline0 };
    Outcome outcome;
    std::optional<double> x_exit;
};

struct GridRational {
    GridFunction values;
    std::vector<std::size_t> degenerate_nodes;
};

struct ReplicateRow {
    double x, y1, y0, y2, y_rational, y_reference;
    bool degenerate;
};

/// Unique root y > x of 2 y^2 (y - x) = p, for p > 0, x >= 0.
double isocline(double p, double x);

/// Unique root y > x of 2 y (y - x) (3 y - 2 x) = 1 (the initialisation
/// curve: the locus where the solution slope matches the isocline-family
/// slope, equivalently the inflection locus of the solution curves).
double limit_curve(double x);

/// First approximation y1: the limit curve sampled on the default grid.
GridFunction initial_grid(double x_lo = 0.0, double x_hi = 3.0, double h = 0.1);

/// Differentiation half of the Picard pair: y0(x) = x - (1/2) d/dx (1/y1),
/// second-order central differences inside, one-sided at the two edges.
GridFunction picard_differential(const GridFunction& y1);

/// Integration half: 1/y2(x) = 2 int_x^xhi (y1(t) - t) dt + 2 T(x_hi), with
/// composite Simpson on the grid and the asymptotic closed-form tail T.
GridFunction picard_integral(const GridFunction& y1, const AsymptoticSeries& series);

/// Pointwise rational iteration of three grids with the shared degenerate
/// fallback (keeps y2 at flagged nodes).
GridRational rational_iteration_grid(const GridFunction& y0, const GridFunction& y1,
                                     const GridFunction& y2, double degenerate_tol = kDegenerateTol);

/// Coefficients c_2..c_K of the large-x expansion, by matching powers in
/// y' = 2 y^2 (y - x). c_2 = 1/2; the odd pattern c_3 = c_4 = 0 follows.
AsymptoticSeries asymptotic_series(int order);

/// y(0) of the separatrix by backward integration from y(x_star) = x_star.
double separatrix_y0(double x_star, double rtol = 1e-12, double atol = 1e-14);

/// Forward run from (0, y0_val) classified against the anti-funnel walls:
/// crossing 2y^2(y-x) = 1 upward exits above, crossing y = x downward leaves
/// through the isocline 0. Integrator blow-up counts as exits_above.
SeparatrixClassification classify_forward(double y0_val, double x_max);

/// Full replication pipeline. One rational-iteration sweep by default;
/// additional sweeps recompute the Picard pair from the corrected grid
/// (experimental, no accuracy claim). The reference column is the backward
/// shot from x_star = 10 evaluated through dense output.
std::vector<ReplicateRow> replicate_table(double h = 0.1, double x_hi = 3.0,
                                          int series_order = 6, int sweeps = 1);

}  // namespace ratit

#endif
