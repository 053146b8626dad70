#include "epr/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epr/correlations.hpp"
#include "epr/errors.hpp"

namespace epr {

std::vector<double> difference_image(const Interferogram& a, const Interferogram& b) {
    if (a.n != b.n || a.pixel_pitch_um != b.pixel_pitch_um || a.plane != b.plane)
        throw std::invalid_argument("difference_image: frames have mismatched geometry");
    std::vector<double> d(a.values.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = a.values[i] - b.values[i];
    return d;
}

Profile marginalize_y(const std::vector<double>& map, const Grid1D& camera_axis) {
    const int n = camera_axis.n;
    if (map.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("marginalize_y: map size does not match the camera axis");
    Profile p;
    p.axis = camera_axis;
    p.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double* row = &map[static_cast<size_t>(i) * n];
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += row[j];
        p.values[i] = s / n;
    }
    return p;
}

std::vector<double> transpose_map(const std::vector<double>& map, int n) {
    std::vector<double> t(map.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[static_cast<size_t>(j) * n + i] = map[static_cast<size_t>(i) * n + j];
    return t;
}

Profile scale_max_one(Profile p) {
    const double peak = *std::max_element(p.values.begin(), p.values.end());
    if (!(peak > 0.0)) throw std::domain_error("scale_max_one: profile maximum is not positive");
    for (double& v : p.values) v /= peak;
    return p;
}

namespace {

// 4x4 normal-equation solve, Gaussian elimination with partial pivoting
bool solve4(std::array<std::array<double, 4>, 4> m, std::array<double, 4> rhs,
            std::array<double, 4>& out) {
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-300) return false;
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (int r = 3; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < 4; ++c) s -= m[r][c] * out[c];
        out[r] = s / m[r][r];
    }
    return true;
}

double sse_of(const std::vector<double>& x, const std::vector<double>& y, double a, double c,
              double s, double b) {
    double sse = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = (x[i] - c) / s;
        const double r = y[i] - (a * std::exp(-0.5 * dx * dx) + b);
        sse += r * r;
    }
    return sse;
}

}  // namespace

GaussianFit fit_gaussian(const Profile& profile) {
    const auto& y = profile.values;
    const int n = profile.axis.n;
    if (n < 8) throw std::invalid_argument("fit_gaussian: need at least 8 samples");
    const std::vector<double> x = profile.axis.coordinates();

    // moment initialization: offset from the outer deciles, centroid and
    // moment width from the offset-subtracted positive part
    const int edge = std::max(2, n / 10);
    std::vector<double> edges;
    edges.reserve(2 * edge);
    for (int i = 0; i < edge; ++i) {
        edges.push_back(y[i]);
        edges.push_back(y[n - 1 - i]);
    }
    std::nth_element(edges.begin(), edges.begin() + edges.size() / 2, edges.end());
    double b = edges[edges.size() / 2];
    const double peak = *std::max_element(y.begin(), y.end());
    double a = peak - b;

    GaussianFit fit;
    fit.offset = b;
    fit.amplitude = a;
    fit.center = 0.0;
    fit.sigma = profile.axis.extent() / 4.0;
    if (!(a > 0.0)) {
        fit.converged = false;  // flat or inverted profile: flag, best effort
        fit.residual_rms = std::sqrt(sse_of(x, y, a, fit.center, fit.sigma, b) / n);
        return fit;
    }
    double w_sum = 0.0, c = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = std::max(y[i] - b, 0.0);
        w_sum += w;
        c += w * x[i];
    }
    c /= w_sum;
    double var = 0.0;
    for (int i = 0; i < n; ++i) var += std::max(y[i] - b, 0.0) * (x[i] - c) * (x[i] - c);
    double s = std::sqrt(var / w_sum);
    s = std::max(s, 0.5 * profile.axis.spacing);

    // damped Gauss-Newton on (A, c, sigma, B)
    double lambda = 1e-3;
    double sse = sse_of(x, y, a, c, s, b);
    int iter = 0;
    bool converged = false;
    double last_rejected_change = 1.0;
    for (; iter < 200; ++iter) {
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (int i = 0; i < n; ++i) {
            const double t = (x[i] - c) / s;
            const double g = std::exp(-0.5 * t * t);
            const double r = y[i] - (a * g + b);
            const std::array<double, 4> j = {g, a * g * t / s, a * g * t * t / s, 1.0};
            for (int u = 0; u < 4; ++u) {
                jtr[u] += j[u] * r;
                for (int v = u; v < 4; ++v) jtj[u][v] += j[u] * j[v];
            }
        }
        for (int u = 0; u < 4; ++u)
            for (int v = 0; v < u; ++v) jtj[u][v] = jtj[v][u];

        bool accepted = false;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
            auto damped = jtj;
            for (int u = 0; u < 4; ++u) damped[u][u] *= 1.0 + lambda;
            std::array<double, 4> step{};
            if (!solve4(damped, jtr, step)) {
                lambda *= 10.0;
                continue;
            }
            const double a2 = a + step[0];
            const double c2 = c + step[1];
            double s2 = s + step[2];
            const double b2 = b + step[3];
            if (!(s2 > 0.0)) s2 = 0.5 * s;
            const double sse2 = sse_of(x, y, a2, c2, s2, b2);
            const double scale_ref =
                std::max({std::abs(a), std::abs(c), std::abs(s), std::abs(b), 1e-300});
            const double change = std::max({std::abs(a2 - a), std::abs(c2 - c),
                                            std::abs(s2 - s), std::abs(b2 - b)}) /
                                  scale_ref;
            if (sse2 <= sse) {
                a = a2;
                c = c2;
                s = s2;
                b = b2;
                sse = sse2;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (change < 1e-10) converged = true;
            } else {
                last_rejected_change = change;
                lambda *= 10.0;
            }
        }
        if (!accepted) {
            // heavily damped steps no longer move the parameters: a stationary
            // point at rounding level counts as converged
            if (last_rejected_change < 1e-7) converged = true;
            ++iter;
            break;
        }
        if (converged) {
            ++iter;
            break;
        }
    }

    fit.amplitude = a;
    fit.center = c;
    fit.sigma = s;
    fit.offset = b;
    fit.converged = converged;
    fit.below_pitch = s < profile.axis.spacing;
    fit.iterations = iter;
    fit.residual_rms = std::sqrt(sse / n);
    return fit;
}

double to_crystal_units(const GaussianFit& fit, const ImagingConfig& imaging) {
    if (imaging.mode == PlaneMode::ImagePlane) return fit.sigma / imaging.magnification;
    const double k0 = 2.0 * std::numbers::pi / (imaging.lambda_0_nm * 1e-3);
    return fit.sigma * k0 / (imaging.effective_focal_cm * 1e4);
}

Metrics metrics(double u_ex, double u_th) {
    if (!(u_ex > 0.0) || !(u_th > 0.0)) throw std::domain_error("metrics: inputs must be positive");
    Metrics m;
    m.f_percent = std::abs(u_th - u_ex) / u_th * 100.0;
    m.d = (0.5 / u_ex) * (0.5 / u_ex);
    return m;
}

double theory_uncertainty_product(const DoubleGaussianParams& params, const GridSpec& grid) {
    const Grid1D gx = theory_grid(params, grid, Basis::Position);
    const Grid1D gp = theory_grid(params, grid, Basis::Momentum);
    const auto pos = make_double_gaussian(params, gx, gx, Basis::Position);
    const auto mom = make_double_gaussian(params, gp, gp, Basis::Momentum);
    const double sx = standard_deviation(conditional_distribution(pos, 2));
    const double sp = standard_deviation(conditional_distribution(mom, 2));
    return uncertainty_product(sx, sp);
}

namespace {

struct PlaneResult {
    GaussianFit fit;
    double sigma_crystal = 0.0;
};

PlaneResult analyze_plane(const FramePair& frames, const ImagingConfig& cfg) {
    const auto diff = difference_image(frames.at_delta_c, frames.at_delta_d);
    Profile prof = marginalize_y(diff, frames.at_delta_c.axis());
    prof = scale_max_one(std::move(prof));
    PlaneResult r;
    r.fit = fit_gaussian(prof);
    r.sigma_crystal = to_crystal_units(r.fit, cfg);
    return r;
}

}  // namespace

EprReport run_pipeline(const FramePair& image_frames, const FramePair& fourier_frames,
                       const ImagingConfig& image_cfg, const ImagingConfig& fourier_cfg,
                       const DoubleGaussianParams& params, const GridSpec& grid,
                       std::vector<std::pair<std::string, std::string>> config_echo,
                       double u_th_hint) {
    const PlaneResult img = analyze_plane(image_frames, image_cfg);
    const PlaneResult fou = analyze_plane(fourier_frames, fourier_cfg);

    EprReport rep;
    rep.fit_image = img.fit;
    rep.fit_fourier = fou.fit;
    rep.delta_x_cond_um = img.sigma_crystal;
    rep.delta_p_cond_hbar_per_um = fou.sigma_crystal;
    rep.u_hbar = rep.delta_x_cond_um * rep.delta_p_cond_hbar_per_um;
    rep.u_th_hbar = u_th_hint > 0.0 ? u_th_hint : theory_uncertainty_product(params, grid);
    const Metrics m = metrics(rep.u_hbar, rep.u_th_hbar);
    rep.f_percent = m.f_percent;
    rep.d = m.d;
    rep.degraded = !img.fit.converged || !fou.fit.converged;
    rep.config_echo = std::move(config_echo);
    return rep;
}

}  // namespace epr
