// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Numeric targets and tolerances are frozen here; run via ctest or
// directly from the build tree.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "epr/analysis.hpp"
#include "epr/cli.hpp"
#include "epr/config.hpp"
#include "epr/correlations.hpp"
#include "epr/instrument.hpp"
#include "epr/io.hpp"
#include "epr/kernels.hpp"
#include "epr/rng.hpp"

using namespace epr;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

struct Criterion {
    std::string name;
    bool ok = true;
    std::ostringstream detail;

    Criterion(int number, const std::string& title) { name = std::to_string(number) + ". " + title; }
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "  FAILED: " << what << "\n";
        }
    }
    ~Criterion() {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
        const std::string d = detail.str();
        if (!d.empty()) std::fputs(d.c_str(), stdout);
        if (!ok) ++g_failures;
    }
};

bool close_rel(double x, double ref, double tol) { return std::abs(x / ref - 1.0) < tol; }

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const DoubleGaussianParams kPaper = DoubleGaussianParams::from_crystal(388.0, 2.0, 405.0);

double profile_moment_sigma(const Profile& p) {
    double w = 0.0, m1 = 0.0;
    for (int i = 0; i < p.axis.n; ++i) {
        w += p.values[i];
        m1 += p.values[i] * p.axis.coordinate(i);
    }
    m1 /= w;
    double m2 = 0.0;
    for (int i = 0; i < p.axis.n; ++i) {
        const double d = p.axis.coordinate(i) - m1;
        m2 += p.values[i] * d * d;
    }
    return std::sqrt(m2 / w);
}

Profile noiseless_difference_profile(PlaneMode mode) {
    RunConfig cfg;
    CameraConfig cam = cfg.camera();
    SimulateOptions opts;
    opts.noiseless = true;
    const FramePair pair =
        simulate_experiment(kPaper, cfg.imaging(mode), cam, 0.0, kPi, opts);
    const auto diff = difference_image(pair.at_delta_c, pair.at_delta_d);
    return marginalize_y(diff, pair.at_delta_c.axis());
}

double max1_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = 0.0, mb = 0.0;
    for (double v : a) ma = std::max(ma, std::abs(v));
    for (double v : b) mb = std::max(mb, std::abs(v));
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(std::abs(a[i]) / ma - std::abs(b[i]) / mb));
    return worst;
}

}  // namespace

static void criterion_1_theory() {
    Criterion c(1, "theory reproduction");
    const auto t0 = std::chrono::steady_clock::now();
    const double sm = sigma_minus_um(2.0, 405.0);
    c.expect(std::abs(sm - 7.659) < 1e-3, "sigma_minus(2 mm, 405 nm) = " + io::fmt_double(sm));
    const double sx = analytic::conditional_sigma_x(kPaper);
    const double sp = analytic::conditional_sigma_p(kPaper);
    c.expect(close_rel(sx, 7.658, 1.5e-3), "conditional sigma_x = " + io::fmt_double(sx));
    c.expect(close_rel(sp, 2.577e-3, 1.5e-3), "conditional sigma_p = " + io::fmt_double(sp));
    const double u_th = analytic::uncertainty_product_theory(kPaper);
    c.expect(close_rel(u_th, 1.96e-2, 0.01), "U_th = " + io::fmt_double(u_th));
    c.expect(elapsed_s(t0) < 1.0, "theory block exceeded 1 s");
    c.detail << "  sigma_minus " << io::fmt_double(sm) << " um, sigma_x " << io::fmt_double(sx)
             << " um, sigma_p " << io::fmt_double(sp) << " hbar/um, U_th " << io::fmt_double(u_th)
             << " hbar\n";
}

static void criterion_2_camera_plane() {
    Criterion c(2, "camera-plane theory widths");
    const double s_img = profile_moment_sigma(noiseless_difference_profile(PlaneMode::ImagePlane));
    const double s_fou =
        profile_moment_sigma(noiseless_difference_profile(PlaneMode::FourierPlane));
    c.expect(close_rel(s_img, 30.6, 0.01), "image-plane sigma = " + io::fmt_double(s_img));
    c.expect(close_rel(s_fou, 49.8, 0.01), "fourier-plane sigma = " + io::fmt_double(s_fou));
    c.detail << "  image " << io::fmt_double(s_img) << " um, fourier " << io::fmt_double(s_fou)
             << " um\n";
}

static void criterion_3_metrics() {
    Criterion c(3, "metric regression on the quoted inputs");
    const Metrics m = metrics(1.67e-2, 1.96e-2);
    c.expect(m.f_percent > 14.5 && m.f_percent < 15.0, "F = " + io::fmt_double(m.f_percent));
    c.expect(std::abs(m.d - 896.0) <= 1.0, "D = " + io::fmt_double(m.d));
    c.detail << "  F " << io::fmt_double(m.f_percent) << " %, D " << io::fmt_double(m.d) << "\n";
}

static void criterion_4_oracle_equivalence() {
    Criterion c(4, "oracle equivalence on the default grid");
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    const Grid1D gx = theory_grid(kPaper, cfg.grid_spec(), Basis::Position);
    const Grid1D gp = theory_grid(kPaper, cfg.grid_spec(), Basis::Momentum);
    const auto pos = make_double_gaussian(kPaper, gx, gx, Basis::Position);
    const auto mom = make_double_gaussian(kPaper, gp, gp, Basis::Momentum);
    const auto mom_fft = fourier_pair(pos);

    const auto check_wp = [&](const BiphotonAmplitude& s, double tol, const char* label) {
        const auto w = cross_spectral_density(s);
        const auto p = conditional_distribution(s, 2);
        std::vector<double> wm(w.values.size());
        for (size_t i = 0; i < wm.size(); ++i) wm[i] = std::abs(w.values[i]);
        const double dev = max1_deviation(wm, p.values);
        c.expect(dev < tol, std::string(label) + " W-P deviation " + io::fmt_double(dev));
        return dev;
    };
    const double d1 = check_wp(pos, 1e-3, "position");
    const double d2 = check_wp(mom, 1e-3, "momentum");
    const double d3 = check_wp(mom_fft, 1e-3, "momentum-via-transform");

    // sampled momentum form against the transformed position form
    std::vector<cplx> direct;
    kernels::sample_double_gaussian(direct, mom_fft.axis1, mom_fft.axis2, Basis::Momentum,
                                    kPaper.sigma_p_um, kPaper.sigma_minus_um);
    BiphotonAmplitude ms{mom_fft.axis1, mom_fft.axis2, Basis::Momentum, std::move(direct)};
    ms = normalize(std::move(ms));
    // the default window truncates at 4.5 marginal sigma; compare on a window
    // wide enough that truncation sits below the 1e-6 target
    const Grid1D ge(2048, 1.8, Basis::Position);
    const auto pos_e = make_double_gaussian(kPaper, ge, ge, Basis::Position);
    const auto mom_e = fourier_pair(pos_e);
    std::vector<cplx> direct_e;
    kernels::sample_double_gaussian(direct_e, mom_e.axis1, mom_e.axis2, Basis::Momentum,
                                    kPaper.sigma_p_um, kPaper.sigma_minus_um);
    BiphotonAmplitude ms_e{mom_e.axis1, mom_e.axis2, Basis::Momentum, std::move(direct_e)};
    ms_e = normalize(std::move(ms_e));
    double worst = 0.0, peak = 0.0;
    for (size_t i = 0; i < ms_e.values.size(); ++i) {
        worst = std::max(worst, std::abs(mom_e.values[i] - ms_e.values[i]));
        peak = std::max(peak, std::abs(ms_e.values[i]));
    }
    c.expect(worst / peak < 1e-6, "transform-pair max relative error " + io::fmt_double(worst / peak));

    const double sx = standard_deviation(conditional_distribution(pos, 2));
    const double sp = standard_deviation(conditional_distribution(mom, 2));
    c.expect(close_rel(sx, analytic::conditional_sigma_x(kPaper), 5e-3),
             "sampled sigma_x " + io::fmt_double(sx));
    c.expect(close_rel(sp, analytic::conditional_sigma_p(kPaper), 5e-3),
             "sampled sigma_p " + io::fmt_double(sp));

    const double secs = elapsed_s(t0);
    c.expect(secs < 30.0, "exceeded 30 s: " + io::fmt_double(secs));
    c.detail << "  W-P deviations " << io::fmt_double(d1) << " / " << io::fmt_double(d2) << " / "
             << io::fmt_double(d3) << ", pair error " << io::fmt_double(worst / peak) << ", "
             << io::fmt_double(secs) << " s\n";
}

static void criterion_5_condition_checker() {
    Criterion c(5, "factorization-condition checker");
    RunConfig cfg;
    const Grid1D gx = theory_grid(kPaper, cfg.grid_spec(), Basis::Position);
    const Grid1D gp = theory_grid(kPaper, cfg.grid_spec(), Basis::Momentum);
    const auto pos = make_double_gaussian(kPaper, gx, gx, Basis::Position);
    const auto mom = make_double_gaussian(kPaper, gp, gp, Basis::Momentum);

    const auto rp = check_factorization_condition(pos);
    const auto rm = check_factorization_condition(mom);
    c.expect(rp.satisfied && rp.ratio_dispersion < 1e-6,
             "position dispersion " + io::fmt_double(rp.ratio_dispersion));
    c.expect(rm.satisfied && rm.ratio_dispersion < 1e-6,
             "momentum dispersion " + io::fmt_double(rm.ratio_dispersion));

    auto chirped = mom;
    apply_chirp(chirped, 2e5);
    const auto rc = check_factorization_condition(chirped);
    c.expect(!rc.satisfied, "chirped state not rejected");

    BiphotonAmplitude sep;
    sep.axis1 = sep.axis2 = gx;
    sep.values.resize(static_cast<size_t>(gx.n) * gx.n);
    for (int i = 0; i < gx.n; ++i) {
        const double a = gx.coordinate(i);
        for (int j = 0; j < gx.n; ++j) {
            const double b = gx.coordinate(j);
            sep.at(i, j) = std::exp(-a * a / (2.0 * 90.0 * 90.0)) *
                           std::exp(-b * b / (2.0 * 35.0 * 35.0));
        }
    }
    sep = normalize(std::move(sep));
    const auto rs = check_factorization_condition(sep);
    c.expect(rs.satisfied, "separable product dispersion " + io::fmt_double(rs.ratio_dispersion));
    c.detail << "  dispersions: position " << io::fmt_double(rp.ratio_dispersion) << ", momentum "
             << io::fmt_double(rm.ratio_dispersion) << ", chirped "
             << io::fmt_double(rc.ratio_dispersion) << ", separable "
             << io::fmt_double(rs.ratio_dispersion) << "\n";
}

static void criterion_6_separability_boundary() {
    Criterion c(6, "separability boundary and Schmidt number");
    const auto equal = DoubleGaussianParams::from_widths(388.0, 388.0, 810.0);
    RunConfig cfg;
    cfg.position_spacing_um = 0.0;  // derive for the equal-width state

    // pipeline U at the boundary
    SimulateOptions opts;
    opts.noiseless = true;
    opts.grid = cfg.grid_spec();
    CameraConfig cam = cfg.camera();
    const auto image = simulate_experiment(equal, cfg.imaging(PlaneMode::ImagePlane), cam, 0.0,
                                           kPi, opts);
    const auto fourier = simulate_experiment(equal, cfg.imaging(PlaneMode::FourierPlane), cam,
                                             0.0, kPi, opts);
    const auto rep = run_pipeline(image, fourier, cfg.imaging(PlaneMode::ImagePlane),
                                  cfg.imaging(PlaneMode::FourierPlane), equal, opts.grid);
    c.expect(close_rel(rep.u_hbar, 0.5, 5e-3), "boundary U = " + io::fmt_double(rep.u_hbar));
    c.expect(!epr_witness(analytic::uncertainty_product_theory(equal)).violates,
             "witness fired at the boundary");

    const Grid1D ge = theory_grid(equal, cfg.grid_spec(), Basis::Position);
    const double k_equal = schmidt_number(make_double_gaussian(equal, ge, ge, Basis::Position));
    c.expect(std::abs(k_equal - 1.0) < 1e-6, "boundary K = " + io::fmt_double(k_equal));

    const Grid1D gx = theory_grid(kPaper, RunConfig{}.grid_spec(), Basis::Position);
    const double k_paper = schmidt_number(make_double_gaussian(kPaper, gx, gx, Basis::Position));
    const double k_formula = analytic::schmidt_number(kPaper);
    c.expect(close_rel(k_paper, k_formula, 0.02), "paper K = " + io::fmt_double(k_paper));
    c.detail << "  boundary U " << io::fmt_double(rep.u_hbar) << ", boundary K "
             << io::fmt_double(k_equal) << ", paper K " << io::fmt_double(k_paper) << " vs "
             << io::fmt_double(k_formula) << "\n";
}

static void criterion_7_end_to_end() {
    Criterion c(7, "noiseless simulate -> analyze recovers the theory product");
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "epr_acceptance" / "noiseless";
    fs::remove_all(dir);
    RunConfig cfg;
    cfg.noiseless = true;
    cfg.out_dir = dir.string();
    std::ostringstream log;
    c.expect(cli::cmd_simulate(cfg, log) == cli::kExitOk, "simulate failed");
    c.expect(cli::cmd_analyze(cfg, log) == cli::kExitOk, "analyze failed");
    const std::string report = io::read_text_file((dir / "report.txt").string());
    double u = 0.0, f = -1.0;
    std::istringstream in(report);
    for (std::string key; in >> key;) {
        if (key == "U_hbar") in >> u;
        else if (key == "F_percent") in >> f;
        else in.ignore(4096, '\n');
    }
    const double u_th = analytic::uncertainty_product_theory(kPaper);
    c.expect(close_rel(u, u_th, 0.02), "recovered U = " + io::fmt_double(u));
    c.expect(f >= 0.0 && f < 2.0, "F = " + io::fmt_double(f));
    c.detail << "  U " << io::fmt_double(u) << " hbar (theory " << io::fmt_double(u_th) << "), F "
             << io::fmt_double(f) << " %\n";
}

static void criterion_8_monte_carlo() {
    Criterion c(8, "noisy Monte-Carlo behavior over 100 seeds");
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.seeds = 100;
    const auto sum = cli::run_monte_carlo(cfg);
    c.expect(close_rel(sum.u_median, sum.u_th, 0.10),
             "median U = " + io::fmt_double(sum.u_median));
    int d_over = 0;
    for (const auto& o : sum.outcomes) d_over += o.d > 500.0 ? 1 : 0;
    c.expect(d_over >= 95, "D > 500 in only " + std::to_string(d_over) + " seeds");

    RunConfig one = cfg;
    one.seed = cfg.seed + 17;
    one.seeds = 1;
    const auto a = cli::run_monte_carlo(one);
    const auto b = cli::run_monte_carlo(one);
    c.expect(a.outcomes[0].report_text == b.outcomes[0].report_text,
             "fixed-seed reports are not byte-identical");
    c.expect(a.outcomes[0].report_text == sum.outcomes[17].report_text,
             "sweep and single-seed reports differ");

    const double secs = elapsed_s(t0);
    c.expect(secs < 300.0, "exceeded 5 min: " + io::fmt_double(secs));
    c.detail << "  median U " << io::fmt_double(sum.u_median) << " hbar (theory "
             << io::fmt_double(sum.u_th) << "), D > 500 in " << d_over << "/100, "
             << io::fmt_double(secs) << " s\n";
}

static void criterion_9_invariants() {
    Criterion c(9, "invariant suites");
    // Parseval and round-trip on a random amplitude
    const int n = 256;
    const Grid1D g(n, 1.3, Basis::Position);
    const Grid1D gr = reciprocal_grid(g);
    std::vector<cplx> m(static_cast<size_t>(n) * n);
    RandomStream rs(5, 1);
    for (auto& v : m) v = cplx(rs.next_gaussian(), rs.next_gaussian());
    const auto original = m;
    double before = 0.0;
    for (const auto& v : m) before += std::norm(v);
    kernels::centered_transform_2d(m, g, g, -1);
    double after = 0.0;
    for (const auto& v : m) after += std::norm(v);
    c.expect(std::abs(after * gr.spacing * gr.spacing / (before * g.spacing * g.spacing) - 1.0) <
                 1e-10,
             "Parseval violated");
    kernels::centered_transform_2d(m, gr, gr, +1);
    double worst = 0.0;
    for (size_t i = 0; i < m.size(); ++i) worst = std::max(worst, std::abs(m[i] - original[i]));
    c.expect(worst < 1e-10, "round-trip error " + io::fmt_double(worst));

    // difference-image proportionality at 1e-12
    RunConfig cfg;
    cfg.n_pixels = 128;
    const auto model =
        build_plane_model(kPaper, cfg.imaging(PlaneMode::ImagePlane), cfg.camera(), cfg.grid_spec());
    const CameraGeometry geom{cfg.n_pixels, cfg.pixel_pitch_um, PlaneMode::ImagePlane};
    const auto f0 = interferometer_frame(model.intensity_axis, model.intensity_axis, model.w_axis,
                                         model.w_axis, geom, 0.0, 0.25, 0.25,
                                         InversionMode::Full2D, true);
    const auto fpi = interferometer_frame(model.intensity_axis, model.intensity_axis,
                                          model.w_axis, model.w_axis, geom, kPi, 0.25, 0.25,
                                          InversionMode::Full2D, true);
    double wpeak = 0.0;
    for (double v : model.w_axis) wpeak = std::max(wpeak, std::abs(v));
    const double coeff = 2.0 * 2.0 * std::sqrt(0.25 * 0.25) * (std::cos(0.0) - std::cos(kPi));
    double prop_err = 0.0;
    for (int i = 0; i < geom.n; ++i)
        for (int j = 0; j < geom.n; ++j) {
            const double d = f0.at(i, j) - fpi.at(i, j);
            prop_err = std::max(
                prop_err, std::abs(d - coeff * model.w_axis[i] * model.w_axis[j]) /
                              (wpeak * wpeak * coeff));
        }
    c.expect(prop_err < 1e-12, "difference proportionality error " + io::fmt_double(prop_err));

    // exchange symmetry is exact
    const Grid1D gs(512, 1.8, Basis::Position);
    const auto psi = make_double_gaussian(kPaper, gs, gs, Basis::Position);
    bool symmetric = true;
    for (int i = 0; i < gs.n && symmetric; ++i)
        for (int j = 0; j < i; ++j)
            if (psi.at(i, j) != psi.at(j, i)) {
                symmetric = false;
                break;
            }
    c.expect(symmetric, "exchange symmetry broken");

    // pipeline scale invariance (power-of-two scale: bitwise)
    SimulateOptions opts;
    opts.noiseless = true;
    CameraConfig cam = cfg.camera();
    FramePair image = simulate_experiment(kPaper, cfg.imaging(PlaneMode::ImagePlane), cam, 0.0,
                                          kPi, opts);
    FramePair fourier = simulate_experiment(kPaper, cfg.imaging(PlaneMode::FourierPlane), cam,
                                            0.0, kPi, opts);
    const auto base = run_pipeline(image, fourier, cfg.imaging(PlaneMode::ImagePlane),
                                   cfg.imaging(PlaneMode::FourierPlane), kPaper);
    for (auto* fp : {&image, &fourier})
        for (auto* fr : {&fp->at_delta_c, &fp->at_delta_d})
            for (double& v : fr->values) v *= 64.0;
    const auto scaled = run_pipeline(image, fourier, cfg.imaging(PlaneMode::ImagePlane),
                                     cfg.imaging(PlaneMode::FourierPlane), kPaper);
    c.expect(scaled.u_hbar == base.u_hbar && scaled.f_percent == base.f_percent &&
                 scaled.d == base.d,
             "scale invariance broken");

    // fit recovery at 0.1 percent down to 1.5 pixel pitch
    bool fits_ok = true;
    for (double sigma : {24.0, 26.25, 49.5, 120.0}) {
        Profile p;
        p.axis = Grid1D(512, 16.0, Basis::Position);
        p.values.resize(512);
        for (int i = 0; i < 512; ++i) {
            const double x = p.axis.coordinate(i) - 11.0;
            p.values[i] = 0.8 * std::exp(-0.5 * x * x / (sigma * sigma)) + 0.05;
        }
        const auto fit = fit_gaussian(p);
        fits_ok &= fit.converged && std::abs(fit.sigma / sigma - 1.0) < 1e-3;
    }
    c.expect(fits_ok, "noiseless fit recovery above 0.1 percent");
}

int main() {
    criterion_1_theory();
    criterion_2_camera_plane();
    criterion_3_metrics();
    criterion_4_oracle_equivalence();
    criterion_5_condition_checker();
    criterion_6_separability_boundary();
    criterion_7_end_to_end();
    criterion_8_monte_carlo();
    criterion_9_invariants();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
