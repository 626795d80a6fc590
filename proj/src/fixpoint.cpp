#include "ratit/fixpoint.hpp"

#include <cmath>
#include <stdexcept>

namespace ratit {

namespace {

constexpr double kDivergenceBound = 1e100;

void check_finite(double v, const char* who) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(who) + ": map returned a non-finite value");
}

}  // namespace

PicardResult picard_iterate(const ScalarMap& f, double x0, int n) {
    if (n < 1) throw std::invalid_argument("picard_iterate: n must be positive");
    std::vector<double> xs{x0};
    bool diverged = false;
    double x = x0;
    for (int k = 0; k < n; ++k) {
        x = f(x);
        check_finite(x, "picard_iterate");
        xs.push_back(x);
        if (std::abs(x) > kDivergenceBound) {
            diverged = true;
            break;
        }
    }
    return PicardResult{RealSequence(std::move(xs), 0), diverged};
}

VectorPicardResult picard_iterate(const VectorMap& f, const std::vector<double>& x0, int n) {
    if (n < 1) throw std::invalid_argument("picard_iterate: n must be positive");
    std::vector<std::vector<double>> xs{x0};
    bool diverged = false;
    std::vector<double> x = x0;
    for (int k = 0; k < n && !diverged; ++k) {
        x = f(x);
        for (double v : x) {
            check_finite(v, "picard_iterate");
            if (std::abs(v) > kDivergenceBound) diverged = true;
        }
        xs.push_back(x);
    }
    return VectorPicardResult{std::move(xs), diverged};
}

double rational_iteration_step(double x1, double x2, double x3, double degenerate_tol,
                               bool* degenerate) {
    return detail::delta2_triple(x1, x2, x3, degenerate_tol, degenerate);
}

SolveReport steffensen_solve(const ScalarMap& f, double x0, double atol, double rtol, int maxit) {
    if (atol < 0 || rtol < 0 || (atol == 0 && rtol == 0))
        throw std::invalid_argument("steffensen_solve: need atol >= 0, rtol >= 0, not both zero");
    if (maxit < 1) throw std::invalid_argument("steffensen_solve: maxit must be positive");

    SolveReport rep{};
    rep.trace.push_back(x0);
    double x = x0;
    rep.step_degenerate.push_back(false);
    bool converged = false;
    int degenerate_steps = 0;
    while (rep.iterations < maxit && !converged) {
        const double y1 = f(x);
        check_finite(y1, "steffensen_solve");
        const double y2 = f(y1);
        check_finite(y2, "steffensen_solve");
        rep.residuals.push_back(std::abs(y1 - x));  // |f(x_k) - x_k|
        bool deg = false;
        const double xn = rational_iteration_step(x, y1, y2, kDegenerateTol, &deg);
        degenerate_steps += deg ? 1 : 0;
        rep.trace.push_back(xn);
        rep.step_degenerate.push_back(deg);
        ++rep.iterations;
        if (std::abs(xn - x) <= atol + rtol * std::abs(xn)) converged = true;
        x = xn;
    }
    const double fr = std::abs(f(x) - x);
    rep.residuals.push_back(fr);
    rep.solution = x;
    rep.converged = converged;
    rep.degenerate_steps = degenerate_steps;
    rep.final_residual = fr;
    return rep;
}

VectorSolveReport vector_steffensen_solve(const VectorMap& f, const std::vector<double>& x0,
                                          double atol, double rtol, int maxit) {
    if (x0.empty()) throw std::invalid_argument("vector_steffensen_solve: empty initial point");
    if (atol < 0 || rtol < 0 || (atol == 0 && rtol == 0))
        throw std::invalid_argument("vector_steffensen_solve: need atol >= 0, rtol >= 0, not both zero");
    if (maxit < 1) throw std::invalid_argument("vector_steffensen_solve: maxit must be positive");
    const std::size_t d = x0.size();

    auto max_norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    auto eval = [&](const std::vector<double>& x) {
        std::vector<double> y = f(x);
        if (y.size() != d)
            throw std::invalid_argument("vector_steffensen_solve: map changed the dimension");
        for (double v : y) check_finite(v, "vector_steffensen_solve");
        return y;
    };

    VectorSolveReport rep{};
    rep.trace.push_back(x0);
    std::vector<double> x = x0;
    bool converged = false;
    int degenerate_steps = 0;
    while (rep.iterations < maxit && !converged) {
        const std::vector<double> y1 = eval(x);
        const std::vector<double> y2 = eval(y1);
        {
            double r = 0.0;
            for (std::size_t i = 0; i < d; ++i) r = std::max(r, std::abs(y1[i] - x[i]));
            rep.residuals.push_back(r);
        }
        std::vector<double> xn(d);
        double step = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            bool deg = false;
            xn[i] = rational_iteration_step(x[i], y1[i], y2[i], kDegenerateTol, &deg);
            degenerate_steps += deg ? 1 : 0;
            step = std::max(step, std::abs(xn[i] - x[i]));
        }
        rep.trace.push_back(xn);
        ++rep.iterations;
        if (step <= atol + rtol * max_norm(xn)) converged = true;
        x = std::move(xn);
    }
    {
        const std::vector<double> fx = eval(x);
        double r = 0.0;
        for (std::size_t i = 0; i < d; ++i) r = std::max(r, std::abs(fx[i] - x[i]));
        rep.residuals.push_back(r);
        rep.final_residual = r;
    }
    rep.solution = x;
    rep.converged = converged;
    rep.degenerate_steps = degenerate_steps;
    return rep;
}

LinearFunction compatibility_determinant(double x1, double x2, double x3) {
    // det [[x2,1,x1],[x3,1,x2],[x,1,x]] = (2*x2 - x1 - x3)*x + (x1*x3 - x2^2)
    return LinearFunction{2.0 * x2 - x1 - x3, x1 * x3 - x2 * x2};
}

}  // namespace ratit
