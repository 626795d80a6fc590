#include "ratit/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratit/sequence.hpp"

namespace ratit {

namespace {

// Fehlberg 4(5) tableau.
constexpr double c2 = 1.0 / 4, c3 = 3.0 / 8, c4 = 12.0 / 13, c5 = 1.0, c6 = 1.0 / 2;
constexpr double a21 = 1.0 / 4;
constexpr double a31 = 3.0 / 32, a32 = 9.0 / 32;
constexpr double a41 = 1932.0 / 2197, a42 = -7200.0 / 2197, a43 = 7296.0 / 2197;
constexpr double a51 = 439.0 / 216, a52 = -8.0, a53 = 3680.0 / 513, a54 = -845.0 / 4104;
constexpr double a61 = -8.0 / 27, a62 = 2.0, a63 = -3544.0 / 2565, a64 = 1859.0 / 4104,
                 a65 = -11.0 / 40;
// 4th-order weights
constexpr double b41 = 25.0 / 216, b43 = 1408.0 / 2565, b44 = 2197.0 / 4104, b45 = -1.0 / 5;
// 5th-order weights (propagated)
constexpr double b51 = 16.0 / 135, b53 = 6656.0 / 12825, b54 = 28561.0 / 56430,
                 b55 = -9.0 / 50, b56 = 2.0 / 55;

double hermite(double xa, double ya, double fa, double xb, double yb, double fb, double x) {
    const double h = xb - xa;
    const double t = (x - xa) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * ya + h10 * h * fa + h01 * yb + h11 * h * fb;
}

}  // namespace

double Trajectory::dense_eval(double x) const {
    const bool fwd = xs_.back() >= xs_.front();
    const double lo = fwd ? xs_.front() : xs_.back();
    const double hi = fwd ? xs_.back() : xs_.front();
    const double slack = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
    if (x < lo - slack || x > hi + slack)
        throw IndexError("Trajectory::dense_eval: x outside the traversed interval");
    x = std::clamp(x, lo, hi);
    if (xs_.size() == 1) return ys_.front();

    // Binary search for the bracketing step, handling either direction.
    std::size_t a = 0, b = xs_.size() - 1;
    while (b - a > 1) {
        const std::size_t mid = (a + b) / 2;
        const bool left = fwd ? (x >= xs_[mid]) : (x <= xs_[mid]);
        if (left)
            a = mid;
        else
            b = mid;
    }
    return hermite(xs_[a], ys_[a], fs_[a], xs_[b], ys_[b], fs_[b], x);
}

Trajectory rkf45_integrate(const IvpProblem& prob, double rtol, double atol,
                           const std::vector<EventSpec>& events, std::size_t max_steps) {
    if (rtol < 1e-14 || atol < 0 || (rtol == 1e-14 && atol == 0))
        throw std::invalid_argument(
            "rkf45_integrate: need rtol >= 1e-14, atol >= 0, not both at their minimum");
    if (prob.x_end == prob.x0)
        throw std::invalid_argument("rkf45_integrate: x_end must differ from x0");
    if (!std::isfinite(prob.y0)) throw std::invalid_argument("rkf45_integrate: non-finite y0");

    Trajectory traj;
    const double dir = prob.x_end > prob.x0 ? 1.0 : -1.0;
    const double span = std::abs(prob.x_end - prob.x0);

    double x = prob.x0;
    double y = prob.y0;
    double fx = prob.rhs(x, y);
    if (!std::isfinite(fx))
        throw std::domain_error("rkf45_integrate: rhs non-finite at the initial point");

    traj.xs_.push_back(x);
    traj.ys_.push_back(y);
    traj.fs_.push_back(fx);
    traj.hs_.push_back(0.0);

    std::vector<double> guard_vals(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) guard_vals[e] = events[e].guard(x, y);

    double h = dir * std::min(span, std::max(1e-4 * span, 1e-8));
    bool done = false;
    while (!done) {
        if (traj.n_steps_ >= max_steps) {
            traj.terminated_by_ = Termination::step_failure;
            traj.note_ = "max_steps exceeded";
            break;
        }
        const double hmin = 1e-14 * std::abs(x) + 1e-300;
        if (std::abs(h) < hmin) {
            traj.terminated_by_ = Termination::step_failure;
            traj.note_ = "step size underflow";
            break;
        }
        // Clamp the final step onto x_end.
        bool last = false;
        if ((x + h - prob.x_end) * dir >= 0.0) {
            h = prob.x_end - x;
            last = true;
        }

        const double k1 = fx;
        const double k2 = prob.rhs(x + c2 * h, y + h * (a21 * k1));
        const double k3 = prob.rhs(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const double k4 = prob.rhs(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = prob.rhs(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 =
            prob.rhs(x + c6 * h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));

        const double y4 = y + h * (b41 * k1 + b43 * k3 + b44 * k4 + b45 * k5);
        const double y5 = y + h * (b51 * k1 + b53 * k3 + b54 * k4 + b55 * k5 + b56 * k6);
        const double err = std::abs(y5 - y4);
        const double scale = atol + rtol * std::max(std::abs(y), std::abs(y5));

        if (!std::isfinite(y5) || !std::isfinite(err) || err > scale) {
            // reject
            ++traj.n_rejected_;
            double factor = 0.2;
            if (std::isfinite(err) && err > 0.0)
                factor = std::clamp(0.9 * std::pow(scale / err, 0.2), 0.2, 5.0);
            h *= std::min(factor, 0.9);
            continue;
        }

        const double x_new = last ? prob.x_end : x + h;
        const double f_new = prob.rhs(x_new, y5);
        if (!std::isfinite(f_new)) {
            ++traj.n_rejected_;
            h *= 0.2;
            continue;
        }

        // Event check on the accepted step, earliest crossing first.
        int fired = -1;
        double ev_x = 0.0;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double g0 = guard_vals[e];
            const double g1 = events[e].guard(x_new, y5);
            const bool up = g0 < 0.0 && g1 >= 0.0;
            const bool down = g0 > 0.0 && g1 <= 0.0;
            const bool match = (events[e].direction == EventSpec::Direction::any && (up || down)) ||
                               (events[e].direction == EventSpec::Direction::up && up) ||
                               (events[e].direction == EventSpec::Direction::down && down);
            if (!match) continue;
            // Bisection on the Hermite interpolant to |guard| <= 1e-10.
            double lo = x, hi_ = x_new;
            double glo = g0;
            double xm = hi_;
            for (int it = 0; it < 200; ++it) {
                xm = 0.5 * (lo + hi_);
                const double ym = hermite(x, y, k1, x_new, y5, f_new, xm);
                const double gm = events[e].guard(xm, ym);
                if (std::abs(gm) <= 1e-10) break;
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = xm;
                    glo = gm;
                } else {
                    hi_ = xm;
                }
            }
            if (fired < 0 || (xm - ev_x) * dir < 0.0) {
                fired = static_cast<int>(e);
                ev_x = xm;
            }
        }
        if (fired >= 0) {
            const double ev_y = hermite(x, y, k1, x_new, y5, f_new, ev_x);
            traj.xs_.push_back(ev_x);
            traj.ys_.push_back(ev_y);
            traj.fs_.push_back(prob.rhs(ev_x, ev_y));
            traj.hs_.push_back(ev_x - x);
            ++traj.n_steps_;
            traj.terminated_by_ = Termination::event;
            traj.event_name_ = events[static_cast<std::size_t>(fired)].name;
            break;
        }

        traj.xs_.push_back(x_new);
        traj.ys_.push_back(y5);
        traj.fs_.push_back(f_new);
        traj.hs_.push_back(h);
        ++traj.n_steps_;
        for (std::size_t e = 0; e < events.size(); ++e) guard_vals[e] = events[e].guard(x_new, y5);

        x = x_new;
        y = y5;
        fx = f_new;
        if (last) {
            traj.terminated_by_ = Termination::reached_end;
            done = true;
            continue;
        }
        double factor = 5.0;
        if (err > 0.0) factor = std::clamp(0.9 * std::pow(scale / err, 0.2), 0.2, 5.0);
        h *= factor;
    }
    return traj;
}

}  // namespace ratit
