// Timing comparison of the serial and OpenMP statevector kernels across
// register sizes: single-qubit gate application, controlled gates, and
// Pauli-string expectation values.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vqeopt/kernels.hpp"
#include "vqeopt/rng.hpp"
#include "vqeopt/state.hpp"

namespace {

using namespace vqeopt;
using kernels::cplx;
using kernels::Mat2;

std::vector<cplx> random_state(int n_qubits, std::uint64_t seed) {
    UniformRng rng(seed);
    std::vector<cplx> amps(std::size_t{1} << n_qubits);
    double norm2 = 0.0;
    for (cplx& a : amps) {
        a = cplx{rng.next_in(-1, 1), rng.next_in(-1, 1)};
        norm2 += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (cplx& a : amps) a *= scale;
    return amps;
}

double time_ms(const std::function<void()>& fn, int repeats) {
    // One warmup pass, then the best of `repeats` timed passes.
    fn();
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0)
                            .count());
    }
    return best;
}

void bench_n(int n) {
    auto amps_serial = random_state(n, 42);
    auto amps_par = amps_serial;
    const Mat2 ry{0.8, -0.6, 0.6, 0.8};

    const int gate_reps = n >= 18 ? 3 : 10;
    const double t_gate_serial = time_ms(
        [&] {
            for (int q = 0; q < n; ++q) {
                kernels::serial::apply_1q(amps_serial, q, ry);
            }
        },
        gate_reps);
    const double t_gate_par = time_ms(
        [&] {
            for (int q = 0; q < n; ++q) {
                kernels::par::apply_1q(amps_par, q, ry);
            }
        },
        gate_reps);

    const double t_cx_serial = time_ms(
        [&] {
            for (int q = 0; q + 1 < n; ++q) {
                kernels::serial::apply_controlled_1q(amps_serial, q, q + 1,
                                                     {0, 1, 1, 0});
            }
        },
        gate_reps);
    const double t_cx_par = time_ms(
        [&] {
            for (int q = 0; q + 1 < n; ++q) {
                kernels::par::apply_controlled_1q(amps_par, q, q + 1,
                                                  {0, 1, 1, 0});
            }
        },
        gate_reps);

    const std::uint64_t zmask = (std::uint64_t{1} << n) - 1;
    const std::uint64_t xmask = zmask >> (n / 2);
    volatile double sink = 0.0;
    const double t_exp_serial = time_ms(
        [&] {
            sink = kernels::serial::pauli_expectation(amps_serial, xmask, 0,
                                                      zmask & ~xmask)
                       .real();
        },
        gate_reps);
    const double t_exp_par = time_ms(
        [&] {
            sink = kernels::par::pauli_expectation(amps_par, xmask, 0,
                                                   zmask & ~xmask)
                       .real();
        },
        gate_reps);
    (void)sink;

    std::printf("%2d | %10.3f %10.3f %7.2fx | %10.3f %10.3f %7.2fx | "
                "%10.3f %10.3f %7.2fx\n",
                n, t_gate_serial, t_gate_par, t_gate_serial / t_gate_par,
                t_cx_serial, t_cx_par, t_cx_serial / t_cx_par, t_exp_serial,
                t_exp_par, t_exp_serial / t_exp_par);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; parallel kernels run serially\n");
#endif
    std::printf(" n | %10s %10s %8s | %10s %10s %8s | %10s %10s %8s\n",
                "1q ser ms", "1q par ms", "speedup", "cx ser ms", "cx par ms",
                "speedup", "exp ser ms", "exp par ms", "speedup");
    for (int n : {10, 12, 14, 16, 18, 20}) {
        bench_n(n);
    }
    return 0;
}
