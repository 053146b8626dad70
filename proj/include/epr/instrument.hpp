#pragma once

#include <cstdint>
#include <vector>

#include "epr/biphoton.hpp"
#include "epr/grid.hpp"

namespace epr {

enum class PlaneMode { ImagePlane, FourierPlane };

const char* plane_name(PlaneMode m);

struct ImagingConfig {
    PlaneMode mode = PlaneMode::ImagePlane;
    double magnification = 4.0;       // image mode
    double effective_focal_cm = 15.0; // Fourier mode
    double lambda_0_nm = 810.0;
};

// Camera-plane um per crystal-plane unit: M (image) or f_e/(k0 hbar) (Fourier).
double camera_scale(const ImagingConfig& cfg);

// Maps a crystal-plane axis onto camera coordinates; the result is a position
// axis either way. Throws on basis/mode mismatch.
Grid1D map_to_camera(const Grid1D& axis, const ImagingConfig& cfg);

struct CameraConfig {
    int n_pixels = 512;
    double pixel_pitch_um = 16.0;
    double exposure_scale = 20000.0; // expected counts at the brightest pixel of a frame pair
    double read_noise_sigma = 10.0;  // counts rms
    double dark_rate = 5.0;          // counts / pixel / frame
    uint64_t rng_seed = 1;

    Grid1D axis() const { return Grid1D(n_pixels, pixel_pitch_um, Basis::Position); }
};

struct Interferogram {
    int n = 0;
    double pixel_pitch_um = 0.0;
    PlaneMode plane = PlaneMode::ImagePlane;
    double delta = 0.0;  // interferometer phase (rad)
    double k1 = 0.25;
    double k2 = 0.25;
    std::vector<double> values;  // row-major [ix * n + iy]

    Grid1D axis() const { return Grid1D(n, pixel_pitch_um, Basis::Position); }
    double& at(int ix, int iy) { return values[static_cast<size_t>(ix) * n + iy]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(ix) * n + iy]; }
};

enum class InversionMode { Full2D, XOnly };

// Camera-plane geometry for frame synthesis.
struct CameraGeometry {
    int n = 0;
    double pixel_pitch_um = 0.0;
    PlaneMode plane = PlaneMode::ImagePlane;
};

// I_out = k1 I + k2 I(inverted) + 2 sqrt(k1 k2) W cos(delta), with 2D maps
// formed as outer products of the per-axis profiles (the family factorizes in
// x and y). collinear_sum doubles the frame, modelling the summed signal and
// idler interferograms of collinear detection. Throws ModelInconsistencyError
// if any pixel comes out negative beyond rounding (W above the geometric-mean
// bound of the two arms).
Interferogram interferometer_frame(const std::vector<double>& intensity_x,
                                   const std::vector<double>& intensity_y,
                                   const std::vector<double>& w_x, const std::vector<double>& w_y,
                                   const CameraGeometry& geom, double delta, double k1, double k2,
                                   InversionMode inversion = InversionMode::Full2D,
                                   bool collinear_sum = false);

// Poisson + Gaussian detection: counts = max(0, Poisson(scale * I + dark) + read * N(0,1)).
// scale multiplies the stored intensities; pass the pair-wide exposure factor
// so both frames of a pair share one scaling. Bit-identical for a fixed
// (seed, frame_id) regardless of threading.
Interferogram detect(const Interferogram& noiseless, const CameraConfig& cam, uint32_t frame_id,
                     double scale = 1.0);

// Per-axis camera-plane profiles of the signal photon for one imaging mode,
// resampled onto the camera pixel axis.
struct PlaneModel {
    ImagingConfig imaging;
    Grid1D camera_axis;
    std::vector<double> intensity_axis;  // marginal intensity per axis
    std::vector<double> w_axis;          // cross-spectral slice per axis
};

struct GridSpec {
    int n = 2048;
    double position_spacing_um = 1.2;       // 0 -> derived from params
    double momentum_spacing_hbar_um = 0.0;  // 0 -> derived from params
};

Grid1D theory_grid(const DoubleGaussianParams& params, const GridSpec& spec, Basis basis);

PlaneModel build_plane_model(const DoubleGaussianParams& params, const ImagingConfig& imaging,
                             const CameraConfig& cam, const GridSpec& grid = {});

struct FramePair {
    Interferogram at_delta_c;
    Interferogram at_delta_d;
};

struct SimulateOptions {
    bool noiseless = false;
    InversionMode inversion = InversionMode::Full2D;
    GridSpec grid;
    uint32_t frame_id_base = 0;  // frames use frame_id_base and frame_id_base + 1
    double k1 = 0.25;            // two passes through 50:50 splitters
    double k2 = 0.25;
};

// Full forward model for one plane: state -> profiles -> interferogram pair at
// delta_c and delta_d, exposure-scaled so the brightest pixel of the pair has
// expectation cam.exposure_scale, then detected unless noiseless.
FramePair simulate_experiment(const DoubleGaussianParams& params, const ImagingConfig& imaging,
                              const CameraConfig& cam, double delta_c = 0.0,
                              double delta_d = 3.14159265358979323846,
                              const SimulateOptions& opts = {});

}  // namespace epr
