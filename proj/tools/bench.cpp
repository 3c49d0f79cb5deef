// Timing harness for the interaction matvec and the damped solve: the
// OpenMP row-parallel kernel against the serial reference. The two paths
// share the per-row accumulation order, so besides speed the harness also
// confirms results match bitwise.

#include <cstdio>
#include <cstring>
#include <omp.h>
#include <vector>

#include "reflect/config.hpp"
#include "reflect/engine.hpp"
#include "reflect/homogenize.hpp"
#include "reflect/system.hpp"

using namespace reflect;

namespace {

double time_matvec(const InteractionSystem& sys, const Strengths& s, bool parallel, int reps,
                   std::vector<double>& out) {
    double best = 1e300;
    for (int rep = 0; rep < reps; ++rep) {
        const double t0 = omp_get_wtime();
        if (parallel)
            apply_interaction(sys, s, out);
        else
            apply_interaction_serial(sys, s, out);
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

void bench_kernel(Kernel kernel, double xi, int side, double d, double r, int reps) {
    LatticeSpec spec{d, r, {{-(side / 2) * d, -(side / 2) * d, -(side / 2) * d},
                            {(side / 2) * d, (side / 2) * d, (side / 2) * d}}};
    const auto config = generate_lattice(spec, kernel, xi);
    const auto sys = assemble_operator(config);

    Strengths s = zero_strengths(sys);
    for (std::size_t k = 0; k < s.data.size(); ++k) s.data[k] = 1.0 + 0.001 * (k % 7);

    std::vector<double> out_serial, out_parallel;
    const double t_serial = time_matvec(sys, s, false, reps, out_serial);
    const double t_parallel = time_matvec(sys, s, true, reps, out_parallel);

    const bool identical =
        std::memcmp(out_serial.data(), out_parallel.data(), out_serial.size() * sizeof(double)) == 0;

    std::printf("%-8s n=%6zu  serial %9.4f ms  openmp %9.4f ms  speedup %5.2fx  bitwise %s\n",
                kernel_name(kernel), sys.size(), 1e3 * t_serial, 1e3 * t_parallel,
                t_serial / t_parallel, identical ? "equal" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    int side = 17;
    int reps = 5;
    if (argc > 1) side = std::atoi(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);

    std::printf("reflect-bench: %d threads, lattice side %d, best of %d reps\n",
                omp_get_max_threads(), side, reps);

    bench_kernel(Kernel::laplace, infinite_xi, side, 1.0, 0.1, reps);
    bench_kernel(Kernel::yukawa, 2.0, side, 1.0, 0.1, reps);
    bench_kernel(Kernel::stokes, infinite_xi, side, 1.0, 0.05, reps);

    // a full damped solve, both ways
    LatticeSpec spec{1.0, 0.1, {{-(side / 2.0), -(side / 2.0), -(side / 2.0)},
                                {side / 2.0, side / 2.0, side / 2.0}}};
    const auto config = generate_lattice(spec, Kernel::yukawa, 1.0);
    const auto source = SourceSpec::point_charge({0.31, 0.17, 0.05}, 4.0 * 3.14159265358979);
    IterationSettings settings{Scheme::damped, 0.0, 300, 1e-8, false};

    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    double t0 = omp_get_wtime();
    auto r1 = iterate(config, source, settings);
    const double t_one = omp_get_wtime() - t0;
    omp_set_num_threads(max_threads);
    t0 = omp_get_wtime();
    auto rn = iterate(config, source, settings);
    const double t_all = omp_get_wtime() - t0;

    const bool same = r1.strengths.data == rn.strengths.data;
    std::printf("damped solve (yukawa): 1 thread %7.1f ms, %d threads %7.1f ms, "
                "%d iters, bitwise %s\n",
                1e3 * t_one, max_threads, 1e3 * t_all, rn.trace.iterations,
                same ? "equal" : "DIFFER");
    return 0;
}
