#pragma once

#include <map>
#include <string>
#include <vector>

#include "epr/biphoton.hpp"
#include "epr/grid.hpp"
#include "epr/instrument.hpp"

namespace epr {

// 1D camera-axis profile; unlike Distribution1D it may carry negative values
// (noisy difference images are not clamped).
struct Profile {
    Grid1D axis;
    std::vector<double> values;
};

struct GaussianFit {
    double amplitude = 0.0;
    double center = 0.0;
    double sigma = 0.0;
    double offset = 0.0;
    double residual_rms = 0.0;
    bool converged = false;
    bool below_pitch = false;  // sigma collapsed under one pixel pitch
    int iterations = 0;
};

struct EprReport {
    double delta_x_cond_um = 0.0;
    double delta_p_cond_hbar_per_um = 0.0;
    double u_hbar = 0.0;
    double u_th_hbar = 0.0;
    double f_percent = 0.0;
    double d = 0.0;
    GaussianFit fit_image;
    GaussianFit fit_fourier;
    bool degraded = false;  // some fit failed to converge; values are best-effort
    std::vector<std::pair<std::string, std::string>> config_echo;
};

// Pixelwise a - b. Throws std::invalid_argument on mismatched geometry.
std::vector<double> difference_image(const Interferogram& a, const Interferogram& b);

// Column mean over the y direction of an n x n camera map.
Profile marginalize_y(const std::vector<double>& map, const Grid1D& camera_axis);

std::vector<double> transpose_map(const std::vector<double>& map, int n);

// Divide by the maximum; throws std::domain_error when the max is not positive.
Profile scale_max_one(Profile p);

// Least-squares A exp(-(x-c)^2 / 2 sigma^2) + B via damped Gauss-Newton;
// moment-based initialization, relative parameter change < 1e-10 or 200
// iterations. Non-convergence is flagged, not thrown.
GaussianFit fit_gaussian(const Profile& profile);

// Camera-plane sigma back to crystal-plane units: sigma/M (image mode) or
// sigma * k0 hbar / f_e (Fourier mode).
double to_crystal_units(const GaussianFit& fit, const ImagingConfig& imaging);

struct Metrics {
    double f_percent = 0.0;  // |U_th - U_ex| / U_th * 100
    double d = 0.0;          // (0.5 hbar / U_ex)^2
};

Metrics metrics(double u_ex, double u_th);

// Difference image -> y-average -> max-1 scaling -> Gaussian fit -> crystal
// units for both planes, then U, F (against the grid-computed theory value)
// and D. A non-converged fit degrades the report instead of failing it.
// u_th_hint > 0 supplies a precomputed theory_uncertainty_product for seed
// sweeps; it must come from the same params and grid.
EprReport run_pipeline(const FramePair& image_frames, const FramePair& fourier_frames,
                       const ImagingConfig& image_cfg, const ImagingConfig& fourier_cfg,
                       const DoubleGaussianParams& params, const GridSpec& grid = {},
                       std::vector<std::pair<std::string, std::string>> config_echo = {},
                       double u_th_hint = 0.0);

// U_th from the sampled conditional distributions (moment route), mirroring
// the theory column the pipeline is compared against.
double theory_uncertainty_product(const DoubleGaussianParams& params, const GridSpec& grid = {});

}  // namespace epr
