#ifndef RATIT_IVP_HPP_
#define RATIT_IVP_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ratit {

/// Scalar initial value problem dy/dx = rhs(x, y) from (x0, y0) to x_end.
/// x_end < x0 selects backward integration.
struct IvpProblem {
    std::function<double(double, double)> rhs;
    double x0;
    double y0;
    double x_end;
};

enum class Termination { reached_end, event, step_failure };

struct EventSpec {
    enum class Direction { any, up, down };
    std::function<double(double, double)> guard;
    Direction direction = Direction::any;
    std::string name;
};

/// Accepted-step skeleton of an adaptive integration plus a cubic-Hermite
/// dense interpolant built on (y, y') at the step endpoints.
class Trajectory {
public:
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    const std::vector<double>& slopes() const { return fs_; }
    const std::vector<double>& h_accepted() const { return hs_; }

    std::size_t n_steps() const { return n_steps_; }
    std::size_t n_rejected() const { return n_rejected_; }
    Termination terminated_by() const { return terminated_by_; }
    const std::string& event_name() const { return event_name_; }
    const std::string& note() const { return note_; }

    double x_last() const { return xs_.back(); }
    double y_last() const { return ys_.back(); }

    /// Hermite evaluation; throws IndexError outside the traversed interval.
    double dense_eval(double x) const;

private:
    friend Trajectory rkf45_integrate(const IvpProblem&, double, double,
                                      const std::vector<EventSpec>&, std::size_t);
    std::vector<double> xs_, ys_, fs_, hs_;
    std::size_t n_steps_ = 0, n_rejected_ = 0;
    Termination terminated_by_ = Termination::reached_end;
    std::string event_name_;
    std::string note_;
};

/// Fehlberg's embedded 4(5) pair with error-per-step control
/// err <= atol + rtol*|y|, safety 0.9 and step factors clamped to [0.2, 5].
/// The first firing event truncates the trajectory at the localized crossing.
Trajectory rkf45_integrate(const IvpProblem& prob, double rtol, double atol,
                           const std::vector<EventSpec>& events = {},
                           std::size_t max_steps = 1000000);

inline double dense_eval(const Trajectory& traj, double x) { return traj.dense_eval(x); }

}  // namespace ratit

#endif
