#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "epr/analysis.hpp"
#include "epr/correlations.hpp"
#include "epr/instrument.hpp"
#include "epr/io.hpp"

using epr::Basis;
using epr::CameraConfig;
using epr::DoubleGaussianParams;
using epr::FramePair;
using epr::GaussianFit;
using epr::Grid1D;
using epr::ImagingConfig;
using epr::PlaneMode;
using epr::Profile;

namespace {

constexpr double kPi = std::numbers::pi;
const DoubleGaussianParams kPaper = DoubleGaussianParams::from_crystal(388.0, 2.0, 405.0);

ImagingConfig image_cfg() { return ImagingConfig{PlaneMode::ImagePlane, 4.0, 15.0, 810.0}; }
ImagingConfig fourier_cfg() { return ImagingConfig{PlaneMode::FourierPlane, 4.0, 15.0, 810.0}; }

Profile sampled_gaussian(int n, double pitch, double amplitude, double center, double sigma,
                         double offset) {
    Profile p;
    p.axis = Grid1D(n, pitch, Basis::Position);
    p.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = p.axis.coordinate(i) - center;
        p.values[i] = amplitude * std::exp(-0.5 * x * x / (sigma * sigma)) + offset;
    }
    return p;
}

struct NoiselessFrames {
    FramePair image;
    FramePair fourier;
};

NoiselessFrames noiseless_frames(const DoubleGaussianParams& params) {
    CameraConfig cam;
    epr::SimulateOptions opts;
    opts.noiseless = true;
    NoiselessFrames f;
    f.image = epr::simulate_experiment(params, image_cfg(), cam, 0.0, kPi, opts);
    opts.frame_id_base = 2;
    f.fourier = epr::simulate_experiment(params, fourier_cfg(), cam, 0.0, kPi, opts);
    return f;
}

}  // namespace

TEST_CASE("difference image") {
    const auto frames = noiseless_frames(kPaper);
    SUBCASE("a frame minus itself vanishes") {
        const auto d = epr::difference_image(frames.image.at_delta_c, frames.image.at_delta_c);
        for (double v : d) CHECK(v == 0.0);
    }
    SUBCASE("swapping the arguments negates the map") {
        const auto d1 = epr::difference_image(frames.image.at_delta_c, frames.image.at_delta_d);
        const auto d2 = epr::difference_image(frames.image.at_delta_d, frames.image.at_delta_c);
        for (size_t i = 0; i < d1.size(); i += 101) CHECK(d1[i] == -d2[i]);
    }
    SUBCASE("mismatched geometry is rejected") {
        CHECK_THROWS_AS(epr::difference_image(frames.image.at_delta_c, frames.fourier.at_delta_d),
                        std::invalid_argument);
    }
}

TEST_CASE("marginalize_y") {
    const Grid1D axis(16, 2.0, Basis::Position);
    SUBCASE("constant map stays constant") {
        std::vector<double> map(16 * 16, 3.5);
        const auto p = epr::marginalize_y(map, axis);
        for (double v : p.values) CHECK(v == doctest::Approx(3.5));
    }
    SUBCASE("separable map yields f(x) times the mean of g") {
        std::vector<double> f(16), g(16);
        for (int i = 0; i < 16; ++i) {
            f[i] = 1.0 + i;
            g[i] = std::sin(0.3 * i) + 2.0;
        }
        double gmean = 0.0;
        for (double v : g) gmean += v;
        gmean /= 16;
        std::vector<double> map(16 * 16);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) map[i * 16 + j] = f[i] * g[j];
        const auto p = epr::marginalize_y(map, axis);
        for (int i = 0; i < 16; ++i) CHECK(p.values[i] == doctest::Approx(f[i] * gmean));
    }
    SUBCASE("transposition exposes the other axis") {
        std::vector<double> map(16 * 16, 0.0);
        map[3 * 16 + 7] = 1.0;
        const auto t = epr::transpose_map(map, 16);
        CHECK(t[7 * 16 + 3] == 1.0);
    }
}

TEST_CASE("scale_max_one") {
    Profile p;
    p.axis = Grid1D(8, 1.0, Basis::Position);
    p.values = {0.0, 1.0, 7.0, 3.0, 2.0, 1.0, 0.5, 0.0};
    const auto scaled = epr::scale_max_one(p);
    CHECK(*std::max_element(scaled.values.begin(), scaled.values.end()) == 1.0);
    CHECK(scaled.values[2] == 1.0);
    const auto again = epr::scale_max_one(scaled);
    CHECK(again.values == scaled.values);

    p.values.assign(8, -1.0);
    CHECK_THROWS_AS(epr::scale_max_one(p), std::domain_error);
}

TEST_CASE("gaussian fit recovers noiseless parameters") {
    SUBCASE("reference experimental widths at the camera pitch") {
        for (double sigma : {26.25, 49.5}) {
            CAPTURE(sigma);
            const auto p = sampled_gaussian(512, 16.0, 1.0, -37.0, sigma, 0.0);
            const auto fit = epr::fit_gaussian(p);
            CHECK(fit.converged);
            CHECK(fit.sigma == doctest::Approx(sigma).epsilon(1e-3));
            CHECK(fit.center == doctest::Approx(-37.0).epsilon(1e-3));
        }
    }
    SUBCASE("offset and amplitude are recovered too") {
        const auto p = sampled_gaussian(256, 16.0, 2.5, 100.0, 60.0, 0.3);
        const auto fit = epr::fit_gaussian(p);
        CHECK(fit.converged);
        CHECK(fit.amplitude == doctest::Approx(2.5).epsilon(1e-6));
        CHECK(fit.offset == doctest::Approx(0.3).epsilon(1e-6));
        CHECK(fit.residual_rms < 1e-9);
    }
    SUBCASE("recovery holds down to 1.5 pixel pitch") {
        const auto p = sampled_gaussian(512, 16.0, 1.0, 5.0, 24.0, 0.0);  // 1.5 px
        const auto fit = epr::fit_gaussian(p);
        CHECK(fit.converged);
        CHECK(fit.sigma == doctest::Approx(24.0).epsilon(1e-3));
        CHECK_FALSE(fit.below_pitch);
    }
    SUBCASE("flat profile is flagged, not thrown") {
        Profile p;
        p.axis = Grid1D(64, 16.0, Basis::Position);
        p.values.assign(64, 1.0);
        const auto fit = epr::fit_gaussian(p);
        CHECK_FALSE(fit.converged);
    }
    SUBCASE("too few samples are rejected") {
        Profile p;
        p.axis = Grid1D(6, 16.0, Basis::Position);
        p.values.assign(6, 1.0);
        CHECK_THROWS_AS(epr::fit_gaussian(p), std::invalid_argument);
    }
}

TEST_CASE("to_crystal_units") {
    GaussianFit fit;
    fit.sigma = 26.25;
    CHECK(epr::to_crystal_units(fit, image_cfg()) == doctest::Approx(6.5625).epsilon(1e-12));
    fit.sigma = 49.5;
    CHECK(epr::to_crystal_units(fit, fourier_cfg()) == doctest::Approx(2.55e-3).epsilon(5e-3));
    ImagingConfig unity = image_cfg();
    unity.magnification = 1.0;
    fit.sigma = 12.5;
    CHECK(epr::to_crystal_units(fit, unity) == 12.5);
}

TEST_CASE("metrics") {
    const auto m = epr::metrics(1.67e-2, 1.96e-2);
    CHECK(m.f_percent == doctest::Approx(14.7959).epsilon(1e-4));
    CHECK(m.f_percent > 14.5);
    CHECK(m.f_percent < 15.0);
    CHECK(m.d == doctest::Approx(896.41).epsilon(1e-3));

    CHECK(epr::metrics(2e-2, 2e-2).f_percent == 0.0);
    CHECK(epr::metrics(0.5, 1.0).d == 1.0);
    // D strictly decreasing in U_ex
    CHECK(epr::metrics(1e-2, 1.0).d > epr::metrics(2e-2, 1.0).d);
    CHECK_THROWS_AS(epr::metrics(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(epr::metrics(1.0, -1.0), std::domain_error);
}

TEST_CASE("noiseless pipeline recovers the theory product") {
    const auto frames = noiseless_frames(kPaper);
    const auto rep = epr::run_pipeline(frames.image, frames.fourier, image_cfg(), fourier_cfg(),
                                       kPaper);
    CHECK(rep.fit_image.converged);
    CHECK(rep.fit_fourier.converged);
    CHECK_FALSE(rep.degraded);
    CHECK(rep.u_hbar == rep.delta_x_cond_um * rep.delta_p_cond_hbar_per_um);
    CHECK(rep.u_th_hbar ==
          doctest::Approx(epr::analytic::uncertainty_product_theory(kPaper)).epsilon(5e-3));
    CHECK(rep.u_hbar == doctest::Approx(rep.u_th_hbar).epsilon(0.02));
    CHECK(rep.f_percent < 2.0);
    // pipeline sigma against the moment oracle, both planes, 0.5 percent
    CHECK(rep.delta_x_cond_um ==
          doctest::Approx(epr::analytic::conditional_sigma_x(kPaper)).epsilon(5e-3));
    CHECK(rep.delta_p_cond_hbar_per_um ==
          doctest::Approx(epr::analytic::conditional_sigma_p(kPaper)).epsilon(5e-3));
}

TEST_CASE("pipeline sigma matches the moment oracle across parameter settings") {
    for (double ratio : {10.0, 25.0, 50.66}) {
        CAPTURE(ratio);
        const auto params = DoubleGaussianParams::from_widths(7.66 * ratio, 7.66, 810.0);
        const auto frames = noiseless_frames(params);
        const auto rep = epr::run_pipeline(frames.image, frames.fourier, image_cfg(),
                                           fourier_cfg(), params);
        CHECK(rep.delta_x_cond_um ==
              doctest::Approx(epr::analytic::conditional_sigma_x(params)).epsilon(5e-3));
        CHECK(rep.delta_p_cond_hbar_per_um ==
              doctest::Approx(epr::analytic::conditional_sigma_p(params)).epsilon(5e-3));
    }
}

TEST_CASE("pipeline is invariant under a common frame scale") {
    const auto frames = noiseless_frames(kPaper);
    const auto base = epr::run_pipeline(frames.image, frames.fourier, image_cfg(), fourier_cfg(),
                                        kPaper);
    const auto rescale = [&](double s) {
        NoiselessFrames scaled = frames;
        for (auto* f : {&scaled.image.at_delta_c, &scaled.image.at_delta_d,
                        &scaled.fourier.at_delta_c, &scaled.fourier.at_delta_d})
            for (double& v : f->values) v *= s;
        return epr::run_pipeline(scaled.image, scaled.fourier, image_cfg(), fourier_cfg(), kPaper);
    };
    // power-of-two scale: every intermediate is exact, so the reports match bitwise
    const auto pow2 = rescale(1024.0);
    CHECK(pow2.u_hbar == base.u_hbar);
    CHECK(pow2.f_percent == base.f_percent);
    CHECK(pow2.d == base.d);
    // arbitrary scale: only the max-1 division rounds, leaving ulp-level noise
    const auto odd = rescale(137.0);
    CHECK(odd.u_hbar == doctest::Approx(base.u_hbar).epsilon(1e-12));
    CHECK(std::abs(odd.f_percent - base.f_percent) < 1e-6);  // percentage points
    CHECK(odd.d == doctest::Approx(base.d).epsilon(1e-10));
}

TEST_CASE("separability boundary: U = 0.5 hbar and no violation") {
    const auto params = DoubleGaussianParams::from_widths(388.0, 388.0, 810.0);
    const auto frames = noiseless_frames(params);
    const auto rep = epr::run_pipeline(frames.image, frames.fourier, image_cfg(), fourier_cfg(),
                                       params);
    CHECK(rep.u_hbar == doctest::Approx(0.5).epsilon(5e-3));
    CHECK_FALSE(epr::epr_witness(epr::analytic::uncertainty_product_theory(params)).violates);
}

TEST_CASE("seeded noisy pipeline reports are deterministic") {
    CameraConfig cam;
    cam.n_pixels = 128;
    cam.rng_seed = 99;
    epr::SimulateOptions opts;
    opts.grid = epr::GridSpec{1024, 1.2, 0.0};
    const auto run_once = [&] {
        FramePair image = epr::simulate_experiment(kPaper, image_cfg(), cam, 0.0, kPi, opts);
        epr::SimulateOptions fopts = opts;
        fopts.frame_id_base = 2;
        FramePair fourier = epr::simulate_experiment(kPaper, fourier_cfg(), cam, 0.0, kPi, fopts);
        return epr::io::format_report(epr::run_pipeline(image, fourier, image_cfg(), fourier_cfg(),
                                                        kPaper, opts.grid));
    };
    CHECK(run_once() == run_once());
}
