// Timing comparison between the parallel kernels and the serial reference
// implementations, with a result-equality check so the two never drift.
// Usage: sharpq_bench [--size N] [--reps R]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sharpq/image.hpp"
#include "sharpq/q_autograd.hpp"
#include "sharpq/q_metric.hpp"
#include "reference/reference.hpp"
#include "support/synthetic.hpp"

using namespace sharpq;
using Clock = std::chrono::steady_clock;

namespace {

double median_ms(const std::vector<double>& times) {
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    return sorted[sorted.size() / 2];
}

template <typename F>
double time_ms(F&& fn, int reps) {
    std::vector<double> times;
    times.reserve(reps);
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        fn();
        times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    return median_ms(times);
}

double max_abs_diff(const LumaImage& a, const LumaImage& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

// Serial counterpart of q_gradient: finite differences are far too slow
// here, so the reference route recomputes the analytic field with the
// library while OpenMP is reduced to one thread.
GradientField q_gradient_single_thread(const LumaImage& img, const QConfig& cfg) {
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    GradientField g = q_gradient(img, cfg);
    omp_set_num_threads(saved);
    return g;
#else
    return q_gradient(img, cfg);
#endif
}

} // namespace

int main(int argc, char** argv) {
    int size = 1024;
    int reps = 5;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--size") && i + 1 < argc) size = std::atoi(argv[++i]);
        if (!std::strcmp(argv[i], "--reps") && i + 1 < argc) reps = std::atoi(argv[++i]);
    }

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("image: %dx%d, reps: %d (median)\n\n", size, size, reps);
    std::printf("%-22s %12s %12s %9s %12s\n", "kernel", "serial ms", "parallel ms", "speedup",
                "max |diff|");

    const LumaImage img = testsupport::natural_scene(1, size);
    const BlurKernel k5 = box_kernel(5);
    const QConfig cfg{8, 0.5, 1e-12};

    {
        LumaImage out_ref(1, 1), out_par(1, 1);
        const double ms_ref = time_ms([&] { out_ref = refimpl::convolve_naive(img, k5); }, reps);
        const double ms_par = time_ms([&] { out_par = convolve(img, k5); }, reps);
        std::printf("%-22s %12.2f %12.2f %8.2fx %12.3e\n", "convolve box:5", ms_ref, ms_par,
                    ms_ref / ms_par, max_abs_diff(out_ref, out_par));
    }
    {
        double q_ref = 0.0, q_par = 0.0;
        const double ms_ref = time_ms([&] { q_ref = refimpl::q_naive(img, 8, 0.5); }, reps);
        const double ms_par = time_ms([&] { q_par = compute_q(img, cfg).q; }, reps);
        std::printf("%-22s %12.2f %12.2f %8.2fx %12.3e\n", "compute_q", ms_ref, ms_par,
                    ms_ref / ms_par, std::abs(q_ref - q_par));
    }
    {
        GradientField g_ser(1, 1), g_par(1, 1);
        const double ms_ref =
            time_ms([&] { g_ser = q_gradient_single_thread(img, cfg); }, reps);
        const double ms_par = time_ms([&] { g_par = q_gradient(img, cfg); }, reps);
        std::printf("%-22s %12.2f %12.2f %8.2fx %12.3e\n", "q_gradient (1 thread)", ms_ref,
                    ms_par, ms_ref / ms_par, max_abs_diff(g_ser, g_par));
    }

    return 0;
}
