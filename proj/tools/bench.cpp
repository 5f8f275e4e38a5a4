// Serial vs OpenMP timings for the data-parallel kernels.
#include <chrono>
#include <cstdio>
#include <functional>

#include "painleve/connect.hpp"
#include "painleve/fit.hpp"
#include "painleve/ode.hpp"
#include "painleve/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace painleve;

double time_of(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n", name, serial,
                parallel, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both columns run the same serial code\n\n");
#endif

    const EquationParams params = EquationParams::two_mode(1.0);

    {
        volatile double sink = 0;
        const double ts = time_of([&] { sink = connect::spanning_tree_constant_c1_serial(2048); });
        const double tp = time_of([&] { sink = connect::spanning_tree_constant_c1(2048); });
        (void)sink;
        report("c1 quadrature (2048^2)", ts, tp);
    }
    {
        AverageReport rep;
        const double ts = time_of([&] {
            rep = connect::averaged_actions_serial(1e-3, params, AverageMethod::monte_carlo,
                                                   2'000'000, 42);
        });
        const double tp = time_of([&] {
            rep = connect::averaged_actions(1e-3, params, AverageMethod::monte_carlo, 2'000'000,
                                            42);
        });
        report("phase average (2e6 draws)", ts, tp);
    }
    {
        stats::ScanSpec spec;
        spec.count = 8;
        spec.lo = 0.5;
        spec.hi = 4.0;
        spec.x0 = -200.0;
        spec.x1 = 200.0;
        spec.pipeline = stats::Pipeline::numeric;
        std::vector<stats::ScanRow> rows;
#ifdef _OPENMP
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        const double ts = time_of([&] { rows = stats::run_scan(spec); });
        omp_set_num_threads(saved);
#else
        const double ts = time_of([&] { rows = stats::run_scan(spec); });
#endif
        const double tp = time_of([&] { rows = stats::run_scan(spec); });
        report("numeric scan (8 points)", ts, tp);
    }
    return 0;
}
