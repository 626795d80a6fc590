#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ratit/accel.hpp"
#include "ratit/fixpoint.hpp"

using ratit::picard_iterate;
using ratit::rational_iteration_step;
using ratit::steffensen_solve;
using ratit::vector_steffensen_solve;

TEST_CASE("picard_iterate basics") {
    ratit::PicardResult id = picard_iterate([](double x) { return x; }, 1.7, 4);
    CHECK(id.iterates.values() == std::vector<double>(5, 1.7));
    CHECK_FALSE(id.diverged);

    ratit::PicardResult c = picard_iterate([](double x) { return std::cos(x); }, 0.5, 3);
    REQUIRE(c.iterates.size() == 4);
    CHECK(c.iterates[1] == std::cos(0.5));
    CHECK(c.iterates[2] == std::cos(std::cos(0.5)));
    CHECK(c.iterates[3] == std::cos(std::cos(std::cos(0.5))));

    ratit::PicardResult h = picard_iterate([](double x) { return x / 2; }, 1.0, 3);
    CHECK(h.iterates.values() == std::vector<double>{1.0, 0.5, 0.25, 0.125});
}

TEST_CASE("picard_iterate divergence guard and error path") {
    ratit::PicardResult d = picard_iterate([](double x) { return x * x; }, 10.0, 500);
    CHECK(d.diverged);
    CHECK(d.iterates.size() < 501);

    CHECK_THROWS_AS(picard_iterate([](double) { return std::nan(""); }, 1.0, 2), std::domain_error);
}

TEST_CASE("rational_iteration_step values") {
    CHECK(rational_iteration_step(3, 2, 1.5) == doctest::Approx(1.0).epsilon(1e-15));
    bool deg = false;
    CHECK(rational_iteration_step(0.7, 0.7, 0.7, ratit::kDegenerateTol, &deg) == 0.7);
    CHECK(deg);
    // frozen from a 40-digit evaluation of the quotient on these inputs
    CHECK(rational_iteration_step(0.5, 0.87758256, 0.63901249) ==
          doctest::Approx(0.7313851839213177).epsilon(1e-14));
}

TEST_CASE("rational_iteration_step agrees with aitken_delta2") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(-3, 3);
    int kept = 0;
    while (kept < 100) {
        const double a = uni(rng), b = uni(rng), c = uni(rng);
        const double den = a - 2 * b + c;
        if (std::abs(den) < 1e-3) continue;
        ++kept;
        ratit::AitkenResult r = ratit::aitken_delta2(ratit::RealSequence({a, b, c}, 0));
        const double direct = rational_iteration_step(a, b, c);
        CHECK(direct == doctest::Approx(r.transformed[0]).epsilon(1e-14));
    }
}

TEST_CASE("steffensen on cos reaches the fixed point quadratically") {
    const double limit = oracles::cos_fixed_point();
    ratit::SolveReport rep = steffensen_solve([](double x) { return std::cos(x); }, 0.5, 1e-14, 0, 50);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 7);
    CHECK(std::abs(rep.solution - 0.7390851332151607) <= 1e-12);
    CHECK(rep.trace.size() == static_cast<std::size_t>(rep.iterations) + 1);
    CHECK(rep.trace[0] == 0.5);
    CHECK(rep.residuals.size() == rep.trace.size());

    ratit::AccelerationReport ord = ratit::acceleration_report(ratit::RealSequence(rep.trace, 0), limit);
    CHECK(ord.estimated_order >= 1.7);
    CHECK(ord.estimated_order <= 2.3);
}

TEST_CASE("plain picard on cos is only first order") {
    std::vector<double> trace{0.5};
    for (int i = 0; i < 40; ++i) trace.push_back(std::cos(trace.back()));
    ratit::AccelerationReport ord =
        ratit::acceleration_report(ratit::RealSequence(trace, 0), oracles::cos_fixed_point());
    CHECK(ord.estimated_order <= 1.1);
}

TEST_CASE("steffensen on the Babylonian map") {
    ratit::SolveReport rep =
        steffensen_solve([](double x) { return 0.5 * (x + 2.0 / x); }, 1.0, 1e-14, 0, 50);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 5);
    CHECK(std::abs(rep.solution - std::sqrt(2.0)) <= 1e-12);
}

TEST_CASE("steffensen is exact on affine maps after one step") {
    ratit::SolveReport rep = steffensen_solve([](double x) { return 0.3 * x + 0.7; }, 0.0, 1e-14, 0, 50);
    CHECK(rep.trace[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.converged);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> alpha_d(-3, 3), beta_d(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = alpha_d(rng);
        double beta = beta_d(rng);
        if (std::abs(beta - 1.0) < 0.1) beta = 0.5;
        ratit::SolveReport r =
            steffensen_solve([=](double x) { return alpha + beta * x; }, 0.3, 1e-13, 1e-13, 50);
        const double fixed = alpha / (1.0 - beta);
        CHECK(std::abs(r.trace[1] - fixed) <= 1e-12 * (1.0 + std::abs(fixed)));
    }
}

TEST_CASE("steffensen stops at maxit without a fixed point") {
    ratit::SolveReport rep = steffensen_solve([](double x) { return x + 1.0; }, 0.0, 1e-12, 0, 25);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 25);
    CHECK(rep.trace.size() == 26);
    // every step is degenerate: the triple is an arithmetic progression
    CHECK(rep.degenerate_steps == 25);
}

TEST_CASE("steffensen rescues where picard diverges") {
    auto f = [](double x) { return std::exp(x) - 2.0; };
    ratit::SolveReport rep = steffensen_solve(f, 1.0, 1e-14, 0, 50);
    CHECK(rep.converged);
    CHECK(rep.final_residual <= 1e-10);
    const double star = rep.solution;  // ~1.1462

    ratit::PicardResult p = picard_iterate(f, 1.0, 20);
    CHECK(std::abs(p.iterates[p.iterates.size() - 1] - star) > std::abs(1.0 - star));
}

TEST_CASE("steffensen input validation") {
    CHECK_THROWS_AS(steffensen_solve([](double x) { return x; }, 0.0, 0.0, 0.0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(steffensen_solve([](double x) { return std::log(x); }, -2.0, 1e-12, 0, 10),
                    std::domain_error);
}

TEST_CASE("vector steffensen reduces to the scalar solver at d = 1") {
    auto scalar = steffensen_solve([](double x) { return std::cos(x); }, 0.5, 1e-13, 1e-13, 40);
    auto vec = vector_steffensen_solve(
        [](const std::vector<double>& v) { return std::vector<double>{std::cos(v[0])}; }, {0.5},
        1e-13, 1e-13, 40);
    CHECK(vec.converged == scalar.converged);
    CHECK(vec.iterations == scalar.iterations);
    REQUIRE(vec.trace.size() == scalar.trace.size());
    for (std::size_t k = 0; k < vec.trace.size(); ++k) CHECK(vec.trace[k][0] == scalar.trace[k]);
}

TEST_CASE("vector steffensen on a coupled affine map") {
    // fixed point (1, 1) of the coupled system; componentwise steps are not
    // one-shot exact here, but the solve converges and the residual is tiny
    auto f = [](const std::vector<double>& v) {
        return std::vector<double>{0.5 * v[0] + 0.1 * v[1] + 0.4, 0.2 * v[0] + 0.3 * v[1] + 0.5};
    };
    auto rep = vector_steffensen_solve(f, {0.0, 0.0}, 1e-13, 0, 60);
    CHECK(rep.converged);
    CHECK(rep.final_residual <= 1e-10);
    CHECK(rep.solution[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.solution[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("vector steffensen is one-shot exact on a diagonal affine map") {
    auto f = [](const std::vector<double>& v) {
        return std::vector<double>{0.25 * v[0] + 0.75, -0.5 * v[1] + 3.0};
    };
    auto rep = vector_steffensen_solve(f, {0.0, 0.0}, 1e-13, 0, 10);
    CHECK(rep.trace[1][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.trace[1][1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("vector steffensen on the damped cosine pair") {
    auto f = [](const std::vector<double>& v) {
        return std::vector<double>{0.5 * std::cos(v[1]) + 0.5, 0.5 * std::cos(v[0]) + 0.5};
    };
    // oracle: 1e4 plain iterations
    std::vector<double> p{0.0, 0.0};
    for (int i = 0; i < 10000; ++i) p = f(p);
    auto rep = vector_steffensen_solve(f, {0.0, 0.0}, 1e-13, 0, 10);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 10);
    CHECK(rep.final_residual <= 1e-10);
    CHECK(rep.solution[0] == doctest::Approx(p[0]).epsilon(1e-9));
    CHECK(rep.solution[1] == doctest::Approx(p[1]).epsilon(1e-9));
}

TEST_CASE("compatibility determinant matches the rational step") {
    ratit::LinearFunction lf = ratit::compatibility_determinant(3, 2, 1.5);
    REQUIRE(lf.coefficient != 0.0);
    CHECK(-lf.constant / lf.coefficient == doctest::Approx(rational_iteration_step(3, 2, 1.5)));

    ratit::LinearFunction sing = ratit::compatibility_determinant(0.9, 0.9, 0.9);
    CHECK(sing.coefficient == 0.0);
    CHECK(sing.constant == 0.0);

    // arithmetic progression: determinant singular, fallback keeps x3
    ratit::LinearFunction ap = ratit::compatibility_determinant(0, 1, 2);
    CHECK(ap.coefficient == 0.0);
    CHECK(rational_iteration_step(0, 1, 2) == 2.0);
}
