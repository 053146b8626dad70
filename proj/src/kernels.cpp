#include "epr/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epr/rng.hpp"
#include "kernel_primitives.hpp"

namespace epr::detail {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2_at_least(int n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}

Pow2Fft::Pow2Fft(int n_, int sign_) : n(n_), sign(sign_) {
    twiddle.resize(n / 2);
    for (int k = 0; k < n / 2; ++k) {
        double ang = sign * 2.0 * std::numbers::pi * k / n;
        twiddle[k] = cplx(std::cos(ang), std::sin(ang));
    }
    rev.resize(n);
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (1 << b)) r |= 1 << (bits - 1 - b);
        rev[i] = r;
    }
}

void Pow2Fft::execute(cplx* a) const {
    for (int i = 0; i < n; ++i)
        if (rev[i] > i) std::swap(a[i], a[rev[i]]);
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len >> 1;
        const int step = n / len;
        for (int start = 0; start < n; start += len) {
            for (int j = 0; j < half; ++j) {
                const cplx w = twiddle[j * step];
                const cplx u = a[start + j];
                const cplx v = a[start + j + half] * w;
                a[start + j] = u + v;
                a[start + j + half] = u - v;
            }
        }
    }
}

FftPlan::FftPlan(int n_, int sign_) : n(n_), sign(sign_) {
    if (is_pow2(n)) {
        pow2 = Pow2Fft(n, sign);
        return;
    }
    m = next_pow2_at_least(2 * n - 1);
    pow2 = Pow2Fft(m, -1);
    pow2_inv = Pow2Fft(m, +1);
    chirp.resize(n);
    for (int j = 0; j < n; ++j) {
        // pi j^2 / n reduced mod 2 pi exactly via j^2 mod 2n
        long long r = (static_cast<long long>(j) * j) % (2LL * n);
        double ang = sign * std::numbers::pi * static_cast<double>(r) / n;
        chirp[j] = cplx(std::cos(ang), std::sin(ang));
    }
    std::vector<cplx> v(m, cplx(0.0, 0.0));
    v[0] = std::conj(chirp[0]);
    for (int j = 1; j < n; ++j) {
        v[j] = std::conj(chirp[j]);
        v[m - j] = std::conj(chirp[j]);
    }
    pow2.execute(v.data());
    kernel_fft = std::move(v);
}

void FftPlan::execute(cplx* a, std::vector<cplx>& scratch) const {
    if (m == 0) {
        pow2.execute(a);
        return;
    }
    scratch.assign(m, cplx(0.0, 0.0));
    for (int j = 0; j < n; ++j) scratch[j] = a[j] * chirp[j];
    pow2.execute(scratch.data());
    for (int k = 0; k < m; ++k) scratch[k] *= kernel_fft[k];
    pow2_inv.execute(scratch.data());
    const double inv_m = 1.0 / m;
    for (int k = 0; k < n; ++k) a[k] = scratch[k] * inv_m * chirp[k];
}

CenteredPlan::CenteredPlan(int n_, double spacing_in, int sign_)
    : n(n_), sign(sign_), fft(n_, sign_) {
    // ph_j = e^{-sign i 2 pi c j / n} with c = (n-1)/2; the angle is
    // pi j (n-1) / n, reduced mod 2 pi via j(n-1) mod 2n.
    pre.resize(n);
    post.resize(n);
    for (int j = 0; j < n; ++j) {
        long long r = (static_cast<long long>(j) * (n - 1)) % (2LL * n);
        double ang = -sign * std::numbers::pi * static_cast<double>(r) / n;
        pre[j] = cplx(std::cos(ang), std::sin(ang));
    }
    // constant = e^{sign i 2 pi c^2 / n} * spacing / sqrt(2 pi); the angle is
    // pi (n-1)^2 / (2n), reduced mod 2 pi via (n-1)^2 mod 4n.
    long long r = (static_cast<long long>(n - 1) * (n - 1)) % (4LL * n);
    double ang = sign * std::numbers::pi * static_cast<double>(r) / (2.0 * n);
    cplx constant = cplx(std::cos(ang), std::sin(ang)) *
                    (spacing_in / std::sqrt(2.0 * std::numbers::pi));
    for (int k = 0; k < n; ++k) post[k] = pre[k] * constant;
}

void CenteredPlan::transform_row(cplx* row, std::vector<cplx>& scratch) const {
    for (int j = 0; j < n; ++j) row[j] *= pre[j];
    fft.execute(row, scratch);
    for (int k = 0; k < n; ++k) row[k] *= post[k];
}

void transpose(const std::vector<cplx>& in, std::vector<cplx>& out, int n1, int n2,
               bool parallel) {
    constexpr int kBlock = 64;
    out.resize(in.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (int ib = 0; ib < n1; ib += kBlock) {
        for (int jb = 0; jb < n2; jb += kBlock) {
            const int imax = std::min(ib + kBlock, n1);
            const int jmax = std::min(jb + kBlock, n2);
            for (int i = ib; i < imax; ++i)
                for (int j = jb; j < jmax; ++j)
                    out[static_cast<size_t>(j) * n1 + i] = in[static_cast<size_t>(i) * n2 + j];
        }
    }
}

void centered_transform_2d_impl(std::vector<cplx>& data, const Grid1D& a1, const Grid1D& a2,
                                int sign, bool parallel) {
    const int n1 = a1.n, n2 = a2.n;
    if (static_cast<size_t>(n1) * n2 != data.size())
        throw std::invalid_argument("centered_transform_2d: data size does not match grids");
    const CenteredPlan plan2(n2, a2.spacing, sign);
    const CenteredPlan plan1(n1, a1.spacing, sign);

#pragma omp parallel if (parallel)
    {
        std::vector<cplx> scratch;
#pragma omp for schedule(static)
        for (int i = 0; i < n1; ++i) plan2.transform_row(&data[static_cast<size_t>(i) * n2], scratch);
    }

    std::vector<cplx> t;
    transpose(data, t, n1, n2, parallel);
#pragma omp parallel if (parallel)
    {
        std::vector<cplx> scratch;
#pragma omp for schedule(static)
        for (int j = 0; j < n2; ++j) plan1.transform_row(&t[static_cast<size_t>(j) * n1], scratch);
    }
    transpose(t, data, n2, n1, parallel);
}

std::vector<cplx> cross_spectral_slice_impl(const std::vector<cplx>& a, int n1, int n2, double d2,
                                            bool parallel) {
    std::vector<cplx> w(n1);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n1; ++i) {
        const cplx* row = &a[static_cast<size_t>(i) * n2];
        const cplx* mrow = &a[static_cast<size_t>(n1 - 1 - i) * n2];
        cplx s(0.0, 0.0);
        for (int j = 0; j < n2; ++j) s += std::conj(row[j]) * mrow[j];
        w[i] = s * d2;
    }
    return w;
}

double gram_trace_squared_impl(const std::vector<cplx>& a, int n1, int n2, double d1, double d2,
                               bool parallel) {
    // tr(rho^2) = sum_{i,k} |C_ik|^2 d1^2 with C_ik = sum_j A_ij conj(A_kj) d2;
    // hermitian, so off-diagonal pairs count twice. Per-row partials are
    // combined in fixed order to keep the result thread-count independent.
    std::vector<double> partial(n1, 0.0);
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (int i = 0; i < n1; ++i) {
        const cplx* ri = &a[static_cast<size_t>(i) * n2];
        double acc = 0.0;
        for (int k = i; k < n1; ++k) {
            const cplx* rk = &a[static_cast<size_t>(k) * n2];
            cplx c(0.0, 0.0);
            for (int j = 0; j < n2; ++j) c += ri[j] * std::conj(rk[j]);
            const double mag = std::norm(c);
            acc += (k == i) ? mag : 2.0 * mag;
        }
        partial[i] = acc;
    }
    double total = 0.0;
    for (int i = 0; i < n1; ++i) total += partial[i];
    return total * d2 * d2 * d1 * d1;
}

std::vector<double> row_marginal_impl(const std::vector<cplx>& a, int n1, int n2, double d2,
                                      bool parallel) {
    std::vector<double> m(n1);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n1; ++i) {
        const cplx* row = &a[static_cast<size_t>(i) * n2];
        double s = 0.0;
        for (int j = 0; j < n2; ++j) s += std::norm(row[j]);
        m[i] = s * d2;
    }
    return m;
}

double double_gaussian_value(double a, double b, double q_sum, double q_diff) {
    const double s = a + b;
    const double d = a - b;
    return std::exp(-(s * s * q_sum + d * d * q_diff));
}

void sample_double_gaussian_impl(std::vector<cplx>& out, const Grid1D& axis1, const Grid1D& axis2,
                                 Basis basis, double sigma_p_um, double sigma_minus_um,
                                 bool parallel) {
    const int n1 = axis1.n, n2 = axis2.n;
    out.resize(static_cast<size_t>(n1) * n2);
    // position: exp(-(a+b)^2/4sp^2 - (a-b)^2/4sm^2); momentum swaps the roles
    // of the widths: exp(-(a+b)^2 sp^2/4 - (a-b)^2 sm^2/4), hbar = 1.
    double q_sum, q_diff;
    if (basis == Basis::Position) {
        q_sum = 1.0 / (4.0 * sigma_p_um * sigma_p_um);
        q_diff = 1.0 / (4.0 * sigma_minus_um * sigma_minus_um);
    } else {
        q_sum = sigma_p_um * sigma_p_um / 4.0;
        q_diff = sigma_minus_um * sigma_minus_um / 4.0;
    }
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n1; ++i) {
        const double a = axis1.coordinate(i);
        cplx* row = &out[static_cast<size_t>(i) * n2];
        for (int j = 0; j < n2; ++j)
            row[j] = cplx(double_gaussian_value(a, axis2.coordinate(j), q_sum, q_diff), 0.0);
    }
}

void interference_frame_impl(const std::vector<double>& ix, const std::vector<double>& iy,
                             const std::vector<double>& wx, const std::vector<double>& wy, int n,
                             double cos_delta, double k1, double k2, bool full_inversion,
                             double collinear_factor, std::vector<double>& out, bool parallel) {
    out.resize(static_cast<size_t>(n) * n);
    const double cross = 2.0 * std::sqrt(k1 * k2) * cos_delta;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        const int mi = n - 1 - i;
        double* row = &out[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) {
            const int mj = full_inversion ? n - 1 - j : j;
            const double direct = ix[i] * iy[j];
            const double inverted = ix[mi] * iy[mj];
            // with x-only inversion the y-arms overlap uninverted, so the
            // interference term carries the y marginal instead of W_y
            const double wterm = full_inversion ? wx[i] * wy[j] : wx[i] * iy[j];
            row[j] = collinear_factor * (k1 * direct + k2 * inverted + cross * wterm);
        }
    }
}

double detect_one(double intensity, const DetectorParams& det, uint64_t pixel_index) {
    const double lam = det.scale * intensity + det.dark_rate;
    if (lam <= 0.0 && det.read_noise_sigma <= 0.0) return 0.0;
    RandomStream rs(det.seed, pixel_index, det.frame_id);
    double c = lam > 0.0 ? static_cast<double>(rs.next_poisson(lam)) : 0.0;
    if (det.read_noise_sigma > 0.0) c += det.read_noise_sigma * rs.next_gaussian();
    return c < 0.0 ? 0.0 : c;
}

void detect_pixels_impl(const std::vector<double>& intensity, int n, const DetectorParams& det,
                        std::vector<double>& out, bool parallel) {
    const size_t total = static_cast<size_t>(n) * n;
    out.resize(total);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long p = 0; p < static_cast<long long>(total); ++p)
        out[p] = detect_one(intensity[p], det, static_cast<uint64_t>(p));
}

}  // namespace epr::detail

namespace epr::kernels {

void centered_transform_2d(std::vector<cplx>& data, const Grid1D& a1, const Grid1D& a2, int sign) {
    detail::centered_transform_2d_impl(data, a1, a2, sign, true);
}
std::vector<cplx> cross_spectral_slice(const std::vector<cplx>& a, int n1, int n2, double d2) {
    return detail::cross_spectral_slice_impl(a, n1, n2, d2, true);
}
double gram_trace_squared(const std::vector<cplx>& a, int n1, int n2, double d1, double d2) {
    return detail::gram_trace_squared_impl(a, n1, n2, d1, d2, true);
}
std::vector<double> row_marginal(const std::vector<cplx>& a, int n1, int n2, double d2) {
    return detail::row_marginal_impl(a, n1, n2, d2, true);
}
void sample_double_gaussian(std::vector<cplx>& out, const Grid1D& axis1, const Grid1D& axis2,
                            Basis basis, double sigma_p_um, double sigma_minus_um) {
    detail::sample_double_gaussian_impl(out, axis1, axis2, basis, sigma_p_um, sigma_minus_um, true);
}
void interference_frame(const std::vector<double>& ix, const std::vector<double>& iy,
                        const std::vector<double>& wx, const std::vector<double>& wy, int n,
                        double cos_delta, double k1, double k2, bool full_inversion,
                        double collinear_factor, std::vector<double>& out) {
    detail::interference_frame_impl(ix, iy, wx, wy, n, cos_delta, k1, k2, full_inversion,
                                    collinear_factor, out, true);
}
void detect_pixels(const std::vector<double>& intensity, int n, const DetectorParams& det,
                   std::vector<double>& out) {
    detail::detect_pixels_impl(intensity, n, det, out, true);
}

}  // namespace epr::kernels

namespace epr::reference {

void centered_transform_2d(std::vector<cplx>& data, const Grid1D& a1, const Grid1D& a2, int sign) {
    detail::centered_transform_2d_impl(data, a1, a2, sign, false);
}
std::vector<cplx> cross_spectral_slice(const std::vector<cplx>& a, int n1, int n2, double d2) {
    return detail::cross_spectral_slice_impl(a, n1, n2, d2, false);
}
double gram_trace_squared(const std::vector<cplx>& a, int n1, int n2, double d1, double d2) {
    return detail::gram_trace_squared_impl(a, n1, n2, d1, d2, false);
}
std::vector<double> row_marginal(const std::vector<cplx>& a, int n1, int n2, double d2) {
    return detail::row_marginal_impl(a, n1, n2, d2, false);
}
void sample_double_gaussian(std::vector<cplx>& out, const Grid1D& axis1, const Grid1D& axis2,
                            Basis basis, double sigma_p_um, double sigma_minus_um) {
    detail::sample_double_gaussian_impl(out, axis1, axis2, basis, sigma_p_um, sigma_minus_um,
                                        false);
}
void interference_frame(const std::vector<double>& ix, const std::vector<double>& iy,
                        const std::vector<double>& wx, const std::vector<double>& wy, int n,
                        double cos_delta, double k1, double k2, bool full_inversion,
                        double collinear_factor, std::vector<double>& out) {
    detail::interference_frame_impl(ix, iy, wx, wy, n, cos_delta, k1, k2, full_inversion,
                                    collinear_factor, out, false);
}
void detect_pixels(const std::vector<double>& intensity, int n, const DetectorParams& det,
                   std::vector<double>& out) {
    detail::detect_pixels_impl(intensity, n, det, out, false);
}

std::vector<cplx> centered_dft_1d_direct(const std::vector<cplx>& v, int n, double spacing_in,
                                         int sign) {
    // literal sum_j v_j e^{sign i x_j p_k} * spacing / sqrt(2 pi) on the
    // half-offset grids; O(n^2), the oracle for the FFT path
    const Grid1D gin(n, spacing_in, Basis::Position);
    const Grid1D gout = reciprocal_grid(gin);
    std::vector<cplx> out(n);
    for (int k = 0; k < n; ++k) {
        const double pk = gout.coordinate(k);
        cplx s(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            const double ang = sign * gin.coordinate(j) * pk;
            s += v[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = s * (spacing_in / std::sqrt(2.0 * std::numbers::pi));
    }
    return out;
}

}  // namespace epr::reference
