#include "epr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "epr/errors.hpp"
#include "epr/format.hpp"

namespace epr {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: trailing characters in value for " + key);
    return d;
}

int parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::floor(d)) throw std::invalid_argument("config: " + key + " must be an integer");
    return static_cast<int>(d);
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return u;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad unsigned value for " + key);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " +
                                            std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(line_no));
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "physical.sigma_p_um") cfg.sigma_p_um = parse_double(key, value);
        else if (key == "physical.crystal_length_mm") cfg.crystal_length_mm = parse_double(key, value);
        else if (key == "physical.lambda_p_nm") cfg.lambda_p_nm = parse_double(key, value);
        else if (key == "physical.lambda_0_nm") cfg.lambda_0_nm = parse_double(key, value);
        else if (key == "physical.sigma_minus_um") cfg.sigma_minus_um = parse_double(key, value);
        else if (key == "grid.n") cfg.grid_n = parse_int(key, value);
        else if (key == "grid.position_spacing_um") cfg.position_spacing_um = parse_double(key, value);
        else if (key == "grid.momentum_spacing_hbar_um") cfg.momentum_spacing_hbar_um = parse_double(key, value);
        else if (key == "imaging.magnification") cfg.magnification = parse_double(key, value);
        else if (key == "imaging.effective_focal_cm") cfg.effective_focal_cm = parse_double(key, value);
        else if (key == "camera.n_pixels") cfg.n_pixels = parse_int(key, value);
        else if (key == "camera.pixel_pitch_um") cfg.pixel_pitch_um = parse_double(key, value);
        else if (key == "camera.exposure_scale") cfg.exposure_scale = parse_double(key, value);
        else if (key == "camera.read_noise_sigma") cfg.read_noise_sigma = parse_double(key, value);
        else if (key == "camera.dark_rate") cfg.dark_rate = parse_double(key, value);
        else if (key == "interferometer.k1") cfg.k1 = parse_double(key, value);
        else if (key == "interferometer.k2") cfg.k2 = parse_double(key, value);
        else if (key == "interferometer.delta_c_rad") cfg.delta_c_rad = parse_double(key, value);
        else if (key == "interferometer.delta_d_rad") cfg.delta_d_rad = parse_double(key, value);
        else if (key == "run.seed") cfg.seed = parse_u64(key, value);
        else if (key == "run.seeds") cfg.seeds = parse_int(key, value);
        else if (key == "run.noiseless") cfg.noiseless = parse_bool(key, value);
        else if (key == "run.out_dir") cfg.out_dir = value;
        else if (key == "run.inversion") cfg.inversion = value;
        else throw std::invalid_argument("config: unknown key '" + key + "' at line " +
                                         std::to_string(line_no));
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

DoubleGaussianParams RunConfig::params() const {
    const double lambda0 = lambda_0_nm > 0.0 ? lambda_0_nm : 2.0 * lambda_p_nm;
    if (sigma_minus_um > 0.0)
        return DoubleGaussianParams::from_widths(sigma_p_um, sigma_minus_um, lambda0);
    return DoubleGaussianParams::from_crystal(sigma_p_um, crystal_length_mm, lambda_p_nm, lambda0);
}

GridSpec RunConfig::grid_spec() const {
    return GridSpec{grid_n, position_spacing_um, momentum_spacing_hbar_um};
}

ImagingConfig RunConfig::imaging(PlaneMode mode) const {
    ImagingConfig cfg;
    cfg.mode = mode;
    cfg.magnification = magnification;
    cfg.effective_focal_cm = effective_focal_cm;
    cfg.lambda_0_nm = lambda_0_nm > 0.0 ? lambda_0_nm : 2.0 * lambda_p_nm;
    return cfg;
}

CameraConfig RunConfig::camera() const {
    CameraConfig cam;
    cam.n_pixels = n_pixels;
    cam.pixel_pitch_um = pixel_pitch_um;
    cam.exposure_scale = exposure_scale;
    cam.read_noise_sigma = read_noise_sigma;
    cam.dark_rate = dark_rate;
    cam.rng_seed = seed;
    return cam;
}

InversionMode RunConfig::inversion_mode() const {
    return inversion == "x_only" ? InversionMode::XOnly : InversionMode::Full2D;
}

std::vector<std::string> RunConfig::validate(std::vector<std::string>* warnings) const {
    std::vector<std::string> bad;
    auto require = [&bad](bool ok, const char* msg) {
        if (!ok) bad.emplace_back(msg);
    };
    require(sigma_p_um > 0.0, "physical.sigma_p_um must be positive");
    if (sigma_minus_um == 0.0) {
        require(crystal_length_mm > 0.0,
                "physical.crystal_length_mm must be positive when sigma_minus is derived");
        require(lambda_p_nm > 0.0,
                "physical.lambda_p_nm must be positive when sigma_minus is derived");
    } else {
        require(sigma_minus_um > 0.0, "physical.sigma_minus_um must be positive");
    }
    require(lambda_0_nm > 0.0 || lambda_p_nm > 0.0,
            "physical.lambda_0_nm or lambda_p_nm must pin the down-converted wavelength");
    require(grid_n >= 16 && grid_n % 2 == 0, "grid.n must be even and at least 16");
    require(position_spacing_um >= 0.0, "grid.position_spacing_um must be non-negative");
    require(momentum_spacing_hbar_um >= 0.0, "grid.momentum_spacing_hbar_um must be non-negative");
    require(magnification > 0.0, "imaging.magnification must be positive");
    require(effective_focal_cm > 0.0, "imaging.effective_focal_cm must be positive");
    require(n_pixels >= 16 && n_pixels % 2 == 0, "camera.n_pixels must be even and at least 16");
    require(pixel_pitch_um > 0.0, "camera.pixel_pitch_um must be positive");
    require(exposure_scale >= 0.0, "camera.exposure_scale must be non-negative");
    require(read_noise_sigma >= 0.0, "camera.read_noise_sigma must be non-negative");
    require(dark_rate >= 0.0, "camera.dark_rate must be non-negative");
    require(k1 > 0.0 && k2 > 0.0, "interferometer.k1 and k2 must be positive");
    require(seeds >= 1, "run.seeds must be at least 1");
    require(!out_dir.empty(), "run.out_dir must not be empty");
    require(inversion == "full" || inversion == "x_only",
            "run.inversion must be 'full' or 'x_only'");
    if (warnings && delta_c_rad == delta_d_rad)
        warnings->push_back("delta_c equals delta_d; difference images will be identically zero");
    return bad;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    using io::fmt_double;
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("physical.sigma_p_um", fmt_double(sigma_p_um));
    e.emplace_back("physical.crystal_length_mm", fmt_double(crystal_length_mm));
    e.emplace_back("physical.lambda_p_nm", fmt_double(lambda_p_nm));
    e.emplace_back("physical.lambda_0_nm", fmt_double(lambda_0_nm));
    e.emplace_back("physical.sigma_minus_um", fmt_double(sigma_minus_um));
    e.emplace_back("grid.n", std::to_string(grid_n));
    e.emplace_back("grid.position_spacing_um", fmt_double(position_spacing_um));
    e.emplace_back("grid.momentum_spacing_hbar_um", fmt_double(momentum_spacing_hbar_um));
    e.emplace_back("imaging.magnification", fmt_double(magnification));
    e.emplace_back("imaging.effective_focal_cm", fmt_double(effective_focal_cm));
    e.emplace_back("camera.n_pixels", std::to_string(n_pixels));
    e.emplace_back("camera.pixel_pitch_um", fmt_double(pixel_pitch_um));
    e.emplace_back("camera.exposure_scale", fmt_double(exposure_scale));
    e.emplace_back("camera.read_noise_sigma", fmt_double(read_noise_sigma));
    e.emplace_back("camera.dark_rate", fmt_double(dark_rate));
    e.emplace_back("interferometer.k1", fmt_double(k1));
    e.emplace_back("interferometer.k2", fmt_double(k2));
    e.emplace_back("interferometer.delta_c_rad", fmt_double(delta_c_rad));
    e.emplace_back("interferometer.delta_d_rad", fmt_double(delta_d_rad));
    e.emplace_back("run.seed", std::to_string(seed));
    e.emplace_back("run.seeds", std::to_string(seeds));
    e.emplace_back("run.noiseless", noiseless ? "true" : "false");
    e.emplace_back("run.out_dir", out_dir);
    e.emplace_back("run.inversion", inversion);
    return e;
}

}  // namespace epr
