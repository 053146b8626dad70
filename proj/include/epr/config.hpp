#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "epr/biphoton.hpp"
#include "epr/instrument.hpp"

namespace epr {

// Flat key=value run configuration with [sections]; defaults reproduce the
// reference experiment. Exactly one of (crystal_length, lambda_p) or an
// explicit sigma_minus must pin the correlation width (explicit wins).
struct RunConfig {
    // [physical]
    double sigma_p_um = 388.0;
    double crystal_length_mm = 2.0;
    double lambda_p_nm = 405.0;
    double lambda_0_nm = 810.0;     // 0 -> 2 * lambda_p
    double sigma_minus_um = 0.0;    // 0 -> derived from crystal_length, lambda_p

    // [grid]
    int grid_n = 2048;
    double position_spacing_um = 1.2;       // 0 -> auto from params
    double momentum_spacing_hbar_um = 0.0;  // 0 -> auto from params

    // [imaging]
    double magnification = 4.0;
    double effective_focal_cm = 15.0;

    // [camera]
    int n_pixels = 512;
    double pixel_pitch_um = 16.0;
    double exposure_scale = 20000.0;
    double read_noise_sigma = 10.0;
    double dark_rate = 5.0;

    // [interferometer]
    double k1 = 0.25;
    double k2 = 0.25;
    double delta_c_rad = 0.0;
    double delta_d_rad = 3.14159265358979323846;

    // [run]
    uint64_t seed = 1;
    int seeds = 1;
    bool noiseless = false;
    std::string out_dir = "out";
    std::string inversion = "full";  // full | x_only

    DoubleGaussianParams params() const;
    GridSpec grid_spec() const;
    ImagingConfig imaging(PlaneMode mode) const;
    CameraConfig camera() const;  // rng_seed = seed
    InversionMode inversion_mode() const;

    // One line per violation; empty means valid. Non-fatal oddities (e.g.
    // delta_c == delta_d) land in warnings.
    std::vector<std::string> validate(std::vector<std::string>* warnings = nullptr) const;

    // Every effective key, ordered, for report echoes and reproduction.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

RunConfig parse_config_text(const std::string& text);  // throws std::invalid_argument
RunConfig load_config_file(const std::string& path);   // throws IoError

}  // namespace epr
