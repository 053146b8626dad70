#include "epr/biphoton.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "epr/errors.hpp"
#include "epr/kernels.hpp"

namespace epr {

namespace {

// Narrow / wide Gaussian scales of the family in the units of the basis.
void family_scales(const DoubleGaussianParams& p, Basis basis, double& narrow, double& wide) {
    const double lo = std::min(p.sigma_p_um, p.sigma_minus_um);
    const double hi = std::max(p.sigma_p_um, p.sigma_minus_um);
    if (basis == Basis::Position) {
        narrow = lo;
        wide = hi;
    } else {
        narrow = 1.0 / hi;
        wide = 1.0 / lo;
    }
}

void check_axis(const Grid1D& axis, Basis basis, double narrow, double wide, const char* which,
                BuildInfo* info) {
    if (axis.unit != basis)
        throw std::invalid_argument(std::string("make_double_gaussian: ") + which +
                                    " unit does not match the requested basis");
    if (narrow / axis.spacing < 4.0)
        throw ResolutionError(std::string("make_double_gaussian: ") + which +
                              " spacing too coarse to resolve the narrow scale at >= 4 samples "
                              "per sigma");
    if (info && axis.extent() < 3.0 * wide)
        info->warnings.push_back(std::string(which) +
                                 " extent below 3x the widest Gaussian scale");
}

}  // namespace

double sigma_minus_um(double crystal_length_mm, double lambda_p_nm) {
    if (!(crystal_length_mm > 0.0)) throw std::domain_error("sigma_minus: crystal length must be positive");
    if (!(lambda_p_nm > 0.0)) throw std::domain_error("sigma_minus: pump wavelength must be positive");
    const double length_um = crystal_length_mm * 1e3;
    const double lambda_um = lambda_p_nm * 1e-3;
    return std::sqrt(0.455 * length_um * lambda_um / (2.0 * std::numbers::pi));
}

DoubleGaussianParams DoubleGaussianParams::from_crystal(double sigma_p, double length_mm,
                                                        double lambda_p, double lambda_0) {
    DoubleGaussianParams p;
    p.sigma_p_um = sigma_p;
    p.crystal_length_mm = length_mm;
    p.lambda_p_nm = lambda_p;
    p.sigma_minus_um = epr::sigma_minus_um(length_mm, lambda_p);
    p.lambda_0_nm = lambda_0 > 0.0 ? lambda_0 : 2.0 * lambda_p;
    p.validate();
    return p;
}

DoubleGaussianParams DoubleGaussianParams::from_widths(double sigma_p, double sigma_minus,
                                                       double lambda_0) {
    DoubleGaussianParams p;
    p.sigma_p_um = sigma_p;
    p.sigma_minus_um = sigma_minus;
    p.lambda_0_nm = lambda_0;
    p.validate();
    return p;
}

void DoubleGaussianParams::validate() const {
    if (!(sigma_p_um > 0.0)) throw std::domain_error("params: sigma_p must be positive");
    if (!(sigma_minus_um > 0.0)) throw std::domain_error("params: sigma_minus must be positive");
    if (!(lambda_0_nm > 0.0)) throw std::domain_error("params: lambda_0 must be positive");
}

double BiphotonAmplitude::norm_l2() const {
    // per-row partial sums in fixed order, matching the kernels' reduction rule
    double total = 0.0;
    for (int i = 0; i < axis1.n; ++i) {
        const cplx* row = &values[static_cast<size_t>(i) * axis2.n];
        double s = 0.0;
        for (int j = 0; j < axis2.n; ++j) s += std::norm(row[j]);
        total += s;
    }
    return std::sqrt(total * axis1.spacing * axis2.spacing);
}

BiphotonAmplitude make_double_gaussian(const DoubleGaussianParams& params, const Grid1D& axis1,
                                       const Grid1D& axis2, Basis basis, BuildInfo* info) {
    params.validate();
    double narrow, wide;
    family_scales(params, basis, narrow, wide);
    check_axis(axis1, basis, narrow, wide, "axis1", info);
    check_axis(axis2, basis, narrow, wide, "axis2", info);

    BiphotonAmplitude state;
    state.axis1 = axis1;
    state.axis2 = axis2;
    state.basis = basis;
    kernels::sample_double_gaussian(state.values, axis1, axis2, basis, params.sigma_p_um,
                                    params.sigma_minus_um);
    return normalize(std::move(state));
}

BiphotonAmplitude normalize(BiphotonAmplitude state) {
    const double norm = state.norm_l2();
    if (!(norm > 0.0)) throw DegenerateStateError("normalize: state has zero L2 norm");
    if (std::abs(norm - 1.0) < 1e-14) return state;  // idempotent
    const double inv = 1.0 / norm;
    for (auto& v : state.values) v *= inv;
    return state;
}

BiphotonAmplitude fourier_pair(const BiphotonAmplitude& state) {
    if (std::abs(state.norm_l2() - 1.0) > 1e-9)
        throw std::invalid_argument("fourier_pair: expects a normalized state");
    BiphotonAmplitude out;
    out.axis1 = reciprocal_grid(state.axis1);
    out.axis2 = reciprocal_grid(state.axis2);
    out.basis = state.basis == Basis::Position ? Basis::Momentum : Basis::Position;
    out.values = state.values;
    const int sign = state.basis == Basis::Position ? -1 : +1;
    kernels::centered_transform_2d(out.values, state.axis1, state.axis2, sign);
    return normalize(std::move(out));
}

void apply_chirp(BiphotonAmplitude& state, double alpha) {
    for (int i = 0; i < state.axis1.n; ++i) {
        const double a = state.axis1.coordinate(i);
        cplx* row = &state.values[static_cast<size_t>(i) * state.axis2.n];
        for (int j = 0; j < state.axis2.n; ++j) {
            const double ang = alpha * a * state.axis2.coordinate(j);
            row[j] *= cplx(std::cos(ang), std::sin(ang));
        }
    }
}

Grid1D default_position_grid(const DoubleGaussianParams& params, int n) {
    params.validate();
    const double narrow = std::min(params.sigma_p_um, params.sigma_minus_um);
    return Grid1D(n, narrow / 6.4, Basis::Position);
}

Grid1D default_momentum_grid(const DoubleGaussianParams& params, int n) {
    params.validate();
    const double cond =
        1.0 / std::sqrt(params.sigma_p_um * params.sigma_p_um +
                        params.sigma_minus_um * params.sigma_minus_um);
    return Grid1D(n, cond / 6.4, Basis::Momentum);
}

}  // namespace epr
