// Timing comparison of the OpenMP kernels against the serial reference
// implementations kept for testing. Sizes are synthetic; the replication
// grids themselves are far too small to benefit from threads.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ratit/accel.hpp"
#include "ratit/lemaitre.hpp"
#include "ratit/polyroots.hpp"
#include "ratit/serial_ref.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f, int reps) {
    // warm-up
    f();
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, std::size_t n, double serial_ms, double parallel_ms) {
    std::printf("%-28s n=%-9zu serial %10.3f ms   parallel %10.3f ms   speedup %5.2fx\n", name, n,
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run serially\n");
#endif

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(0.1, 2.0);

    {
        const std::size_t n = 1 << 21;
        std::vector<double> seq(n);
        double v = 2.0;
        for (std::size_t i = 0; i < n; ++i) {
            seq[i] = 1.0 + v;
            v *= 0.999999;
        }
        ratit::RealSequence s(seq, 0);
        volatile double sink = 0.0;
        const double ts = time_ms([&] { sink = ratit::serial::aitken_delta2(seq, 1e-13)[7]; }, 5);
        const double tp = time_ms([&] { sink = ratit::aitken_delta2(s).transformed[7]; }, 5);
        (void)sink;
        report("aitken_delta2", n, ts, tp);
    }

    {
        const std::size_t n = 1 << 20;
        std::vector<double> y0(n), y1(n), y2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double fx = uni(rng);
            y0[i] = fx;
            y1[i] = 0.5 * fx + 0.3;
            y2[i] = 0.5 * y1[i] + 0.3;
        }
        ratit::GridFunction g0(0.0, static_cast<double>(n - 1), 1.0, y0);
        ratit::GridFunction g1(0.0, static_cast<double>(n - 1), 1.0, y1);
        ratit::GridFunction g2(0.0, static_cast<double>(n - 1), 1.0, y2);
        volatile double sink = 0.0;
        const double ts = time_ms(
            [&] { sink = ratit::serial::rational_iteration_pointwise(y0, y1, y2, 1e-13)[9]; }, 5);
        const double tp =
            time_ms([&] { sink = ratit::rational_iteration_grid(g0, g1, g2).values.values[9]; }, 5);
        (void)sink;
        report("rational_iteration_grid", n, ts, tp);
    }

    {
        const std::size_t n = 1 << 15;
        const double h = 10.0 / static_cast<double>(n - 1);
        volatile double sink = 0.0;
        const double ts = time_ms([&] { sink = ratit::serial::limit_curve_samples(0.0, h, n)[5]; }, 3);
        const double tp = time_ms(
            [&] { sink = ratit::initial_grid(0.0, h * static_cast<double>(n - 1), h).values[5]; }, 3);
        (void)sink;
        report("limit_curve sampling", n, ts, tp);
    }

    {
        // degree-5 recurrent series, Hankel quotients for m = 4
        std::vector<double> coeffs{-120.0, 274.0, -225.0, 85.0, -15.0, 1.0};  // roots 1..5
        ratit::Polynomial p(coeffs);
        ratit::RecurrentSeries series = ratit::bernoulli_sequence(p, {}, 2000);
        volatile double sink = 0.0;
        const double ts =
            time_ms([&] { sink = ratit::serial::hankel_ratio_sequence(series.values, 4)[11]; }, 3);
        const double tp = time_ms([&] { sink = ratit::root_products(series, 4).ratios[11]; }, 3);
        (void)sink;
        report("hankel ratio sequence", 2000, ts, tp);
    }

    return 0;
}
