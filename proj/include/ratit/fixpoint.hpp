#ifndef RATIT_FIXPOINT_HPP_
#define RATIT_FIXPOINT_HPP_

#include <functional>
#include <vector>

#include "ratit/accel.hpp"
#include "ratit/sequence.hpp"

namespace ratit {

using ScalarMap = std::function<double(double)>;
using VectorMap = std::function<std::vector<double>(const std::vector<double>&)>;

struct PicardResult {
    RealSequence iterates;  // x0, f(x0), f(f(x0)), ...
    bool diverged;          // stopped early because a coordinate passed 1e100
};

struct VectorPicardResult {
    std::vector<std::vector<double>> iterates;
    bool diverged;
};

struct SolveReport {
    double solution;
    int iterations;                // outer steps taken
    std::vector<double> trace;     // iterations + 1 entries, trace[0] = x0
    std::vector<double> residuals;  // |f(x_k) - x_k| aligned with trace
    std::vector<bool> step_degenerate;  // whether x_k came from the fallback
    bool converged;
    int degenerate_steps;
    double final_residual;
};

struct VectorSolveReport {
    std::vector<double> solution;
    int iterations;
    std::vector<std::vector<double>> trace;
    std::vector<double> residuals;  // max-norm residuals aligned with trace
    bool converged;
    int degenerate_steps;  // total component fallbacks across all steps
    double final_residual;
};

/// Coefficient pair (a, b) of the linear compatibility function a*x + b whose
/// root is the rational-iteration value of the triple.
struct LinearFunction {
    double coefficient;
    double constant;
};

PicardResult picard_iterate(const ScalarMap& f, double x0, int n);
VectorPicardResult picard_iterate(const VectorMap& f, const std::vector<double>& x0, int n);

/// (x1*x3 - x2^2) / (x1 - 2*x2 + x3), with fallback to x3 on a degenerate
/// denominator. When degenerate is non-null it reports whether the fallback
/// fired.
double rational_iteration_step(double x1, double x2, double x3,
                               double degenerate_tol = kDegenerateTol,
                               bool* degenerate = nullptr);

/// Steffensen's fixed-point solver: each outer step takes the fresh triple
/// (x_k, f(x_k), f(f(x_k))) through the rational-iteration step. Two map
/// evaluations per outer step. Stops when |x_{k+1} - x_k| <= atol + rtol*|x_{k+1}|.
SolveReport steffensen_solve(const ScalarMap& f, double x0, double atol, double rtol, int maxit);

/// Componentwise vector variant; stopping rule on the max-norm of the step.
/// For dimension 1 it performs exactly the arithmetic of steffensen_solve.
VectorSolveReport vector_steffensen_solve(const VectorMap& f, const std::vector<double>& x0,
                                          double atol, double rtol, int maxit);

/// Determinant of [[x2,1,x1],[x3,1,x2],[x,1,x]] expanded as a linear function
/// of x; its root coincides with rational_iteration_step(x1, x2, x3).
LinearFunction compatibility_determinant(double x1, double x2, double x3);

}  // namespace ratit

#endif
