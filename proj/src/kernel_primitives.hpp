#pragma once

// Internal single-row / single-pixel primitives shared by the OpenMP kernels
// and their serial reference twins, so the two variants differ only in the
// outer loop and stay bit-identical.

#include <cstdint>
#include <vector>

#include "epr/biphoton.hpp"
#include "epr/grid.hpp"
#include "epr/kernels.hpp"

namespace epr::detail {

bool is_pow2(int n);
int next_pow2_at_least(int n);

// Unnormalized in-place FFT with kernel e^{sign * 2 pi i j k / n}; n a power
// of two. Twiddles and permutation precomputed once per plan.
struct Pow2Fft {
    int n = 0;
    int sign = 0;
    std::vector<cplx> twiddle;  // e^{sign 2 pi i k / n}, k < n/2
    std::vector<int> rev;

    Pow2Fft() = default;
    Pow2Fft(int n, int sign);
    void execute(cplx* a) const;
};

// Any even length via Bluestein's chirp-z reformulation on a padded
// power-of-two convolution; falls through to Pow2Fft directly when possible.
struct FftPlan {
    int n = 0;
    int sign = 0;
    int m = 0;  // pow2 convolution length (0 when n itself is pow2)
    Pow2Fft pow2;          // direct plan (pow2 n) or forward conv plan (length m)
    Pow2Fft pow2_inv;      // inverse conv plan
    std::vector<cplx> chirp;       // e^{sign i pi j^2 / n}
    std::vector<cplx> kernel_fft;  // FFT of the circularly arranged conjugate chirp

    FftPlan() = default;
    FftPlan(int n, int sign);
    // scratch is resized as needed; reusing it across rows avoids reallocation
    void execute(cplx* a, std::vector<cplx>& scratch) const;
};

// Centered physical-units transform on the half-offset axis:
//   out_k = (spacing_in / sqrt(2 pi)) e^{s i 2 pi c^2 / n} ph_k FFT_s(v_j ph_j),
// with ph_j = e^{-s i 2 pi c j / n}, c = (n-1)/2, s = sign. This equals
// sum_j v_j e^{s i x_j p_k} * spacing_in / sqrt(2 pi) exactly.
struct CenteredPlan {
    int n = 0;
    int sign = 0;
    std::vector<cplx> pre;   // ph_j
    std::vector<cplx> post;  // ph_k * constant
    FftPlan fft;

    CenteredPlan() = default;
    CenteredPlan(int n, double spacing_in, int sign);
    void transform_row(cplx* row, std::vector<cplx>& scratch) const;
};

void transpose(const std::vector<cplx>& in, std::vector<cplx>& out, int n1, int n2, bool parallel);

// One camera pixel: Poisson(scale * intensity + dark) + read * N(0,1), clamped
// at zero, drawn from the stream (seed, pixel, frame).
double detect_one(double intensity, const DetectorParams& det, uint64_t pixel_index);

double double_gaussian_value(double a, double b, double q_sum, double q_diff);

// Shared implementations; `parallel` switches the OpenMP team on or off.
void centered_transform_2d_impl(std::vector<cplx>& data, const Grid1D& a1, const Grid1D& a2,
                                int sign, bool parallel);
std::vector<cplx> cross_spectral_slice_impl(const std::vector<cplx>& a, int n1, int n2, double d2,
                                            bool parallel);
double gram_trace_squared_impl(const std::vector<cplx>& a, int n1, int n2, double d1, double d2,
                               bool parallel);
std::vector<double> row_marginal_impl(const std::vector<cplx>& a, int n1, int n2, double d2,
                                      bool parallel);
void sample_double_gaussian_impl(std::vector<cplx>& out, const Grid1D& axis1, const Grid1D& axis2,
                                 Basis basis, double sigma_p_um, double sigma_minus_um,
                                 bool parallel);
void interference_frame_impl(const std::vector<double>& ix, const std::vector<double>& iy,
                             const std::vector<double>& wx, const std::vector<double>& wy, int n,
                             double cos_delta, double k1, double k2, bool full_inversion,
                             double collinear_factor, std::vector<double>& out, bool parallel);
void detect_pixels_impl(const std::vector<double>& intensity, int n, const DetectorParams& det,
                        std::vector<double>& out, bool parallel);

}  // namespace epr::detail
