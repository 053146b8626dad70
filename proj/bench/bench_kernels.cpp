// Timing comparison of the OpenMP kernels against their serial reference
// twins. Run with OMP_NUM_THREADS set to the core count of interest.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <omp.h>

#include "epr/biphoton.hpp"
#include "epr/kernels.hpp"

using epr::Basis;
using epr::cplx;
using epr::Grid1D;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm-up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    const auto params = epr::DoubleGaussianParams::from_crystal(388.0, 2.0, 405.0);
    const Grid1D g(1024, 2.4, Basis::Position);

    std::vector<cplx> state;
    epr::kernels::sample_double_gaussian(state, g, g, Basis::Position, params.sigma_p_um,
                                         params.sigma_minus_um);

    {
        std::vector<cplx> buf;
        row("sample_double_gaussian 1024",
            time_ms([&] { epr::reference::sample_double_gaussian(buf, g, g, Basis::Position,
                                                                 params.sigma_p_um,
                                                                 params.sigma_minus_um); }, 3),
            time_ms([&] { epr::kernels::sample_double_gaussian(buf, g, g, Basis::Position,
                                                               params.sigma_p_um,
                                                               params.sigma_minus_um); }, 3));
    }
    {
        std::vector<cplx> buf;
        row("centered_transform 1024^2",
            time_ms([&] { buf = state; epr::reference::centered_transform_2d(buf, g, g, -1); }, 3),
            time_ms([&] { buf = state; epr::kernels::centered_transform_2d(buf, g, g, -1); }, 3));
    }
    row("cross_spectral 1024^2",
        time_ms([&] { epr::reference::cross_spectral_slice(state, g.n, g.n, g.spacing); }, 5),
        time_ms([&] { epr::kernels::cross_spectral_slice(state, g.n, g.n, g.spacing); }, 5));
    row("gram_trace 1024^2",
        time_ms([&] { epr::reference::gram_trace_squared(state, g.n, g.n, g.spacing, g.spacing); },
                1),
        time_ms([&] { epr::kernels::gram_trace_squared(state, g.n, g.n, g.spacing, g.spacing); },
                1));

    const int cam_n = 512;
    std::vector<double> ix(cam_n), wx(cam_n);
    for (int i = 0; i < cam_n; ++i) {
        const double x = (i - 0.5 * (cam_n - 1)) / 64.0;
        ix[i] = std::exp(-0.5 * x * x);
        wx[i] = std::exp(-2.0 * x * x);
    }
    std::vector<double> frame;
    row("interference_frame 512^2",
        time_ms([&] { epr::reference::interference_frame(ix, ix, wx, wx, cam_n, 1.0, 0.25, 0.25,
                                                         true, 2.0, frame); }, 10),
        time_ms([&] { epr::kernels::interference_frame(ix, ix, wx, wx, cam_n, 1.0, 0.25, 0.25,
                                                       true, 2.0, frame); }, 10));

    epr::DetectorParams det;
    det.scale = 2000.0;
    det.dark_rate = 10.0;
    det.read_noise_sigma = 15.0;
    det.seed = 7;
    det.frame_id = 0;
    std::vector<double> counts;
    row("detect_pixels 512^2",
        time_ms([&] { epr::reference::detect_pixels(frame, cam_n, det, counts); }, 5),
        time_ms([&] { epr::kernels::detect_pixels(frame, cam_n, det, counts); }, 5));

    return 0;
}
