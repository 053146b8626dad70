#pragma once

#include <cstdint>
#include <vector>

#include "epr/biphoton.hpp"
#include "epr/grid.hpp"

// Hot data-parallel kernels. epr::kernels holds the OpenMP versions used by
// the library; epr::reference holds serial twins sharing the same per-row
// primitives, kept for testing and for the benchmark target. Every kernel
// uses a fixed per-row summation order, so the two variants (and any thread
// count) produce bit-identical results.

namespace epr {

struct DetectorParams {
    double scale = 1.0;  // multiplies intensities before the Poisson draw
    double dark_rate = 0.0;
    double read_noise_sigma = 0.0;
    uint64_t seed = 0;
    uint32_t frame_id = 0;
};

namespace kernels {

// In-place centered unitary Fourier kernel over both axes of a row-major
// n1 x n2 matrix. sign = -1 maps position -> momentum, +1 back. Grids carry
// the *input* spacings; outputs live on the reciprocal grids.
void centered_transform_2d(std::vector<cplx>& data, const Grid1D& a1, const Grid1D& a2, int sign);

// W_i = sum_j conj(A[i][j]) * A[mirror(i)][j] * d2
std::vector<cplx> cross_spectral_slice(const std::vector<cplx>& a, int n1, int n2, double d2);

// tr(rho^2) for rho(x, x') = sum_j A[x][j] conj(A[x'][j]) * d2, traced with d1.
double gram_trace_squared(const std::vector<cplx>& a, int n1, int n2, double d1, double d2);

// M_i = sum_j |A[i][j]|^2 * d2   ("photon 1" marginal; transpose for photon 2)
std::vector<double> row_marginal(const std::vector<cplx>& a, int n1, int n2, double d2);

void sample_double_gaussian(std::vector<cplx>& out, const Grid1D& axis1, const Grid1D& axis2,
                            Basis basis, double sigma_p_um, double sigma_minus_um);

// out[ix*n+iy] = k1*Ix[ix]Iy[iy] + k2*(inverted) + 2 sqrt(k1 k2) Wx[ix]Wy[iy] cos_delta,
// all times collinear_factor. full_inversion flips both camera axes in the k2
// arm; otherwise only the first. With axis-only inversion the interference
// term carries Iy in place of Wy (the y-arms then overlap uninverted).
void interference_frame(const std::vector<double>& ix, const std::vector<double>& iy,
                        const std::vector<double>& wx, const std::vector<double>& wy, int n,
                        double cos_delta, double k1, double k2, bool full_inversion,
                        double collinear_factor, std::vector<double>& out);

// counts = max(0, Poisson(scale*I + dark) + read * N(0,1)), one RNG stream per
// (seed, frame_id, pixel), so evaluation order never changes the draw.
void detect_pixels(const std::vector<double>& intensity, int n, const DetectorParams& det,
                   std::vector<double>& out);

}  // namespace kernels

namespace reference {

void centered_transform_2d(std::vector<cplx>& data, const Grid1D& a1, const Grid1D& a2, int sign);
std::vector<cplx> cross_spectral_slice(const std::vector<cplx>& a, int n1, int n2, double d2);
double gram_trace_squared(const std::vector<cplx>& a, int n1, int n2, double d1, double d2);
std::vector<double> row_marginal(const std::vector<cplx>& a, int n1, int n2, double d2);
void sample_double_gaussian(std::vector<cplx>& out, const Grid1D& axis1, const Grid1D& axis2,
                            Basis basis, double sigma_p_um, double sigma_minus_um);
void interference_frame(const std::vector<double>& ix, const std::vector<double>& iy,
                        const std::vector<double>& wx, const std::vector<double>& wy, int n,
                        double cos_delta, double k1, double k2, bool full_inversion,
                        double collinear_factor, std::vector<double>& out);
void detect_pixels(const std::vector<double>& intensity, int n, const DetectorParams& det,
                   std::vector<double>& out);

// O(n^2) evaluation of the centered transform along one axis; the oracle the
// FFT path is tested against.
std::vector<cplx> centered_dft_1d_direct(const std::vector<cplx>& v, int n, double spacing_in,
                                         int sign);

}  // namespace reference

}  // namespace epr
