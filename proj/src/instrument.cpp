#include "epr/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epr/correlations.hpp"
#include "epr/errors.hpp"
#include "epr/kernels.hpp"

namespace epr {

const char* plane_name(PlaneMode m) { return m == PlaneMode::ImagePlane ? "image" : "fourier"; }

double camera_scale(const ImagingConfig& cfg) {
    if (cfg.mode == PlaneMode::ImagePlane) {
        if (!(cfg.magnification > 0.0)) throw std::domain_error("imaging: magnification must be positive");
        return cfg.magnification;
    }
    if (!(cfg.effective_focal_cm > 0.0))
        throw std::domain_error("imaging: effective focal length must be positive");
    if (!(cfg.lambda_0_nm > 0.0)) throw std::domain_error("imaging: lambda_0 must be positive");
    const double k0 = 2.0 * std::numbers::pi / (cfg.lambda_0_nm * 1e-3);  // 1/um
    const double fe_um = cfg.effective_focal_cm * 1e4;
    return fe_um / k0;  // um per (hbar/um), hbar = 1
}

Grid1D map_to_camera(const Grid1D& axis, const ImagingConfig& cfg) {
    const Basis expected = cfg.mode == PlaneMode::ImagePlane ? Basis::Position : Basis::Momentum;
    if (axis.unit != expected)
        throw std::invalid_argument(std::string("map_to_camera: ") + basis_name(axis.unit) +
                                    " axis does not match the " + plane_name(cfg.mode) +
                                    "-plane mode");
    return Grid1D(axis.n, axis.spacing * camera_scale(cfg), Basis::Position);
}

Interferogram interferometer_frame(const std::vector<double>& intensity_x,
                                   const std::vector<double>& intensity_y,
                                   const std::vector<double>& w_x, const std::vector<double>& w_y,
                                   const CameraGeometry& geom, double delta, double k1, double k2,
                                   InversionMode inversion, bool collinear_sum) {
    if (!(k1 >= 0.0) || !(k2 >= 0.0))
        throw std::domain_error("interferometer_frame: arm constants must be non-negative");
    const size_t n = static_cast<size_t>(geom.n);
    if (intensity_x.size() != n || intensity_y.size() != n || w_x.size() != n || w_y.size() != n)
        throw std::invalid_argument("interferometer_frame: profile lengths must equal the camera size");

    Interferogram frame;
    frame.n = geom.n;
    frame.pixel_pitch_um = geom.pixel_pitch_um;
    frame.plane = geom.plane;
    frame.delta = delta;
    frame.k1 = k1;
    frame.k2 = k2;
    kernels::interference_frame(intensity_x, intensity_y, w_x, w_y, geom.n, std::cos(delta), k1,
                                k2, inversion == InversionMode::Full2D,
                                collinear_sum ? 2.0 : 1.0, frame.values);

    // negatives are judged against the size of the constituent terms, not the
    // frame maximum: a balanced dark frame nulls to rounding noise
    const auto abs_peak = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    const double term_scale = (k1 + k2) * abs_peak(intensity_x) * abs_peak(intensity_y) +
                              2.0 * std::sqrt(k1 * k2) * abs_peak(w_x) * abs_peak(w_y);
    double lo = 0.0;
    for (double v : frame.values) lo = std::min(lo, v);
    if (lo < -1e-9 * std::max(term_scale, 1e-300))
        throw ModelInconsistencyError(
            "interferometer_frame: negative intensity; W exceeds the geometric-mean bound of the arms");
    if (lo < 0.0)
        for (double& v : frame.values) v = std::max(v, 0.0);
    return frame;
}

Interferogram detect(const Interferogram& noiseless, const CameraConfig& cam, uint32_t frame_id,
                     double scale) {
    if (!(cam.exposure_scale >= 0.0))
        throw std::domain_error("detect: exposure_scale must be non-negative");
    Interferogram out = noiseless;
    DetectorParams det;
    det.scale = scale;
    det.dark_rate = cam.dark_rate;
    det.read_noise_sigma = cam.read_noise_sigma;
    det.seed = cam.rng_seed;
    det.frame_id = frame_id;
    kernels::detect_pixels(noiseless.values, noiseless.n, det, out.values);
    return out;
}

Grid1D theory_grid(const DoubleGaussianParams& params, const GridSpec& spec, Basis basis) {
    if (basis == Basis::Position) {
        if (spec.position_spacing_um > 0.0)
            return Grid1D(spec.n, spec.position_spacing_um, Basis::Position);
        return default_position_grid(params, spec.n);
    }
    if (spec.momentum_spacing_hbar_um > 0.0)
        return Grid1D(spec.n, spec.momentum_spacing_hbar_um, Basis::Momentum);
    return default_momentum_grid(params, spec.n);
}

namespace {

// Catmull-Rom resample of a smooth profile onto the camera axis; zero outside
// the source extent.
std::vector<double> resample(const std::vector<double>& v, const Grid1D& src, const Grid1D& dst) {
    const int n = src.n;
    std::vector<double> out(dst.n, 0.0);
    for (int k = 0; k < dst.n; ++k) {
        const double t = (dst.coordinate(k) - src.coordinate(0)) / src.spacing;
        const int i1 = static_cast<int>(std::floor(t));
        if (i1 < 0 || i1 >= n - 1) continue;
        const double f = t - i1;
        const double p0 = v[std::max(i1 - 1, 0)];
        const double p1 = v[i1];
        const double p2 = v[i1 + 1];
        const double p3 = v[std::min(i1 + 2, n - 1)];
        out[k] = p1 + 0.5 * f *
                          (p2 - p0 +
                           f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                f * (3.0 * (p1 - p2) + p3 - p0)));
    }
    return out;
}

}  // namespace

PlaneModel build_plane_model(const DoubleGaussianParams& params, const ImagingConfig& imaging,
                             const CameraConfig& cam, const GridSpec& grid) {
    const Basis basis =
        imaging.mode == PlaneMode::ImagePlane ? Basis::Position : Basis::Momentum;
    const Grid1D g = theory_grid(params, grid, basis);
    const BiphotonAmplitude state = make_double_gaussian(params, g, g, basis);

    // Both profiles come from the same normalized state, which preserves the
    // physical anchor W(0,0) = I(0) that sets the fringe contrast.
    const Distribution1D marg = marginal_distribution(state, 1);
    const CrossSpectralSlice w = cross_spectral_density(state);

    double max_re = 0.0, max_im = 0.0;
    for (const cplx& c : w.values) {
        max_re = std::max(max_re, std::abs(c.real()));
        max_im = std::max(max_im, std::abs(c.imag()));
    }
    if (max_im > 1e-6 * max_re)
        throw ModelInconsistencyError(
            "build_plane_model: cross-spectral slice is not real; state unsuitable for the "
            "intensity forward model");
    std::vector<double> w_real(w.values.size());
    for (size_t i = 0; i < w.values.size(); ++i) w_real[i] = w.values[i].real();

    PlaneModel model;
    model.imaging = imaging;
    model.camera_axis = cam.axis();
    const Grid1D mapped = map_to_camera(g, imaging);
    model.intensity_axis = resample(marg.values, mapped, model.camera_axis);
    model.w_axis = resample(w_real, mapped, model.camera_axis);
    return model;
}

FramePair simulate_experiment(const DoubleGaussianParams& params, const ImagingConfig& imaging,
                              const CameraConfig& cam, double delta_c, double delta_d,
                              const SimulateOptions& opts) {
    const PlaneModel model = build_plane_model(params, imaging, cam, opts.grid);
    const CameraGeometry geom{cam.n_pixels, cam.pixel_pitch_um, imaging.mode};
    Interferogram frame_c =
        interferometer_frame(model.intensity_axis, model.intensity_axis, model.w_axis,
                             model.w_axis, geom, delta_c, opts.k1, opts.k2, opts.inversion, true);
    Interferogram frame_d =
        interferometer_frame(model.intensity_axis, model.intensity_axis, model.w_axis,
                             model.w_axis, geom, delta_d, opts.k1, opts.k2, opts.inversion, true);

    double peak = 0.0;
    for (double v : frame_c.values) peak = std::max(peak, v);
    for (double v : frame_d.values) peak = std::max(peak, v);
    const double scale = peak > 0.0 ? cam.exposure_scale / peak : 0.0;

    if (opts.noiseless) {
        for (double& v : frame_c.values) v *= scale;
        for (double& v : frame_d.values) v *= scale;
        return FramePair{std::move(frame_c), std::move(frame_d)};
    }
    return FramePair{detect(frame_c, cam, opts.frame_id_base, scale),
                     detect(frame_d, cam, opts.frame_id_base + 1, scale)};
}

}  // namespace epr
