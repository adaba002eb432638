// Timing comparison between the parallel matrix kernels and the serial
// reference implementations, plus a whole-pipeline sweep timing.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qsr/decomp.hpp"
#include "qsr/lti.hpp"
#include "qsr/matrix.hpp"
#include "qsr/rng.hpp"
#include "qsr/supply.hpp"
#include "qsr/verify.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

qsr::Matrix random_matrix(std::size_t rows, std::size_t cols, qsr::Rng& rng) {
    qsr::Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = rng.normal();
    return out;
}

template <typename F>
double best_of(int repeats, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = clock_type::now();
        fn();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

void bench_multiply() {
    std::printf("multiply: parallel kernel vs serial reference\n");
    std::printf("%8s %12s %12s %9s %10s\n", "size", "serial [s]", "parallel [s]", "speedup",
                "max |diff|");
    qsr::Rng rng(7);
    for (std::size_t n : {64, 128, 256, 512, 768}) {
        const qsr::Matrix a = random_matrix(n, n, rng);
        const qsr::Matrix b = random_matrix(n, n, rng);
        qsr::Matrix serial_out, parallel_out;
        const int repeats = n <= 256 ? 5 : 2;
        const double t_serial = best_of(repeats, [&] { serial_out = qsr::ref::multiply(a, b); });
        const double t_parallel = best_of(repeats, [&] { parallel_out = qsr::multiply(a, b); });
        const double diff = qsr::max_abs(serial_out - parallel_out);
        std::printf("%8zu %12.6f %12.6f %8.2fx %10.2e\n", n, t_serial, t_parallel,
                    t_serial / t_parallel, diff);
    }
}

void bench_congruence() {
    std::printf("\ncongruence b'sb: parallel kernel vs serial reference\n");
    std::printf("%8s %12s %12s %9s %10s\n", "size", "serial [s]", "parallel [s]", "speedup",
                "max |diff|");
    qsr::Rng rng(11);
    for (std::size_t n : {64, 128, 256, 512}) {
        const qsr::Matrix s = random_matrix(n, n, rng);
        const qsr::Matrix b = random_matrix(n, n, rng);
        qsr::Matrix serial_out, parallel_out;
        const int repeats = n <= 256 ? 5 : 2;
        const double t_serial = best_of(repeats, [&] { serial_out = qsr::ref::congruence(s, b); });
        const double t_parallel = best_of(repeats, [&] { parallel_out = qsr::congruence(s, b); });
        const double diff = qsr::max_abs(serial_out - parallel_out);
        std::printf("%8zu %12.6f %12.6f %8.2fx %10.2e\n", n, t_serial, t_parallel,
                    t_serial / t_parallel, diff);
    }
}

void bench_sweep() {
    std::printf("\nfull prefix sweep on synthetic data (all verifications per run)\n");
    const qsr::Matrix a = qsr::Matrix::from_rows({{0.5, 0.1}, {0.0, 0.4}});
    const qsr::Matrix b = qsr::Matrix::from_rows({{1.0}, {0.5}});
    const qsr::Matrix c = qsr::Matrix::from_rows({{0.3, 0.7}});
    const qsr::Matrix d = qsr::Matrix::from_rows({{1.2}});
    const qsr::LtiSystem sys(a, b, c, d);
    const std::vector<std::size_t> lengths{60, 50};
    const auto coll = qsr::generate_pe_data(sys, 2, lengths, {1.0, 0.0, 3},
                                            qsr::InitialStatePolicy::gaussian(0.5));
    const auto form = qsr::preset_l2_gain(4.0, 1, 1);
    const qsr::ToleranceConfig cfg;
    for (std::size_t horizon : {6, 10, 14}) {
        const auto start = clock_type::now();
        const auto sweep = qsr::sweep_nu(coll, form, horizon, 0, 2, horizon - 1, 2, cfg);
        const double elapsed = seconds_since(start);
        std::size_t verified = 0;
        for (const auto& rep : sweep.reports) verified += rep.verdict ? 1 : 0;
        std::printf("  horizon %2zu: %2zu prefixes, %zu verified, %.4f s\n", horizon,
                    sweep.reports.size(), verified, elapsed);
    }
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernels run serially\n\n");
#endif
    bench_multiply();
    bench_congruence();
    bench_sweep();
    return 0;
}
