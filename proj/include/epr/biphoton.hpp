#pragma once

#include <complex>
#include <string>
#include <vector>

#include "epr/grid.hpp"

namespace epr {

using cplx = std::complex<double>;

// Analytic double-Gaussian SPDC state family. sigma_p is the pump waist at the
// crystal plane, sigma_minus the correlation width set by the crystal length.
// All stored lengths keep their conventional units; helpers convert to um.
struct DoubleGaussianParams {
    double sigma_p_um = 0.0;
    double sigma_minus_um = 0.0;
    double lambda_p_nm = 0.0;
    double crystal_length_mm = 0.0;
    double lambda_0_nm = 0.0;

    // sigma_minus derived from crystal length and pump wavelength;
    // lambda_0_nm == 0 selects the degenerate collinear default 2*lambda_p.
    static DoubleGaussianParams from_crystal(double sigma_p_um, double crystal_length_mm,
                                             double lambda_p_nm, double lambda_0_nm = 0.0);
    // explicit correlation width, e.g. for separability-boundary studies
    static DoubleGaussianParams from_widths(double sigma_p_um, double sigma_minus_um,
                                            double lambda_0_nm = 810.0);

    void validate() const;  // throws std::domain_error
    double lambda_0_um() const { return lambda_0_nm * 1e-3; }
};

// Correlation width sqrt(0.455 * L * lambda_p / (2*pi)) in um.
double sigma_minus_um(double crystal_length_mm, double lambda_p_nm);

// Joint transverse amplitude of the photon pair along one transverse axis,
// sampled on axis1 (photon 1) x axis2 (photon 2). The physical 4D state of
// this family factorizes as x-part (x) y-part with identical factors, so one
// matrix per axis suffices. Row-major: values[i1 * axis2.n + i2].
struct BiphotonAmplitude {
    Grid1D axis1;
    Grid1D axis2;
    Basis basis = Basis::Position;
    std::vector<cplx> values;

    cplx& at(int i1, int i2) { return values[static_cast<size_t>(i1) * axis2.n + i2]; }
    const cplx& at(int i1, int i2) const { return values[static_cast<size_t>(i1) * axis2.n + i2]; }

    // sqrt( sum |psi|^2 * d1 * d2 )
    double norm_l2() const;
};

struct BuildInfo {
    std::vector<std::string> warnings;
};

// Samples the double Gaussian in the requested basis and normalizes.
// Throws ResolutionError when spacing cannot resolve the narrowest Gaussian
// scale at >= 4 samples per sigma; records a warning (not an error) when the
// grid extent is below 3x the widest scale.
BiphotonAmplitude make_double_gaussian(const DoubleGaussianParams& params, const Grid1D& axis1,
                                       const Grid1D& axis2, Basis basis, BuildInfo* info = nullptr);

// Unit L2 norm on the grid. Throws DegenerateStateError on all-zero input.
BiphotonAmplitude normalize(BiphotonAmplitude state);

// Joint amplitude in the conjugate basis on the reciprocal grids, evaluated
// with the continuous-transform kernel (1/2*pi*hbar) ii psi e^{+-i(p1 x1 + p2 x2)/hbar}.
// Unitary on the grid measure; output is normalized.
BiphotonAmplitude fourier_pair(const BiphotonAmplitude& state);

// psi *= exp(i * alpha * a1 * a2); breaks the factorization condition for
// alpha large against the grid scale, used to probe the checker.
void apply_chirp(BiphotonAmplitude& state, double alpha);

// Grids resolving both Gaussian scales of the family at the given sample
// count: spacing = narrow-scale / 6.4, matching the 2048 x 1.2 um default for
// the (388, 7.659) um parameter point.
Grid1D default_position_grid(const DoubleGaussianParams& params, int n = 2048);
Grid1D default_momentum_grid(const DoubleGaussianParams& params, int n = 2048);

}  // namespace epr
