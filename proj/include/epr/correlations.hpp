#pragma once

#include <vector>

#include "epr/biphoton.hpp"
#include "epr/grid.hpp"

namespace epr {

enum class Normalization { UnitArea, MaxOne };

struct Distribution1D {
    Grid1D axis;
    std::vector<double> values;  // >= 0
    Normalization norm = Normalization::UnitArea;
};

Distribution1D as_unit_area(Distribution1D d);
Distribution1D as_max_one(Distribution1D d);

// Anti-diagonal slice W(a, -a) of the cross-spectral density.
struct CrossSpectralSlice {
    Grid1D axis;
    std::vector<cplx> values;
    Basis basis = Basis::Position;
};

struct ConditionReport {
    bool satisfied = false;
    double ratio_dispersion = 0.0;  // complex std / |mean| of LHS/RHS over the mask
    double mask_fraction = 0.0;
    double tol = 0.0;
};

// P(a | b = 0) of the non-conditioned photon, unit-area. conditioned_photon is
// the photon pinned at zero. The "at zero" slice on the half-offset grid is
// the geometric mean of the magnitudes of the two central samples, which is
// exact for Gaussian-exponent states (the arithmetic mean is not; it distorts
// the momentum-basis slice by several percent on the default grids).
Distribution1D conditional_distribution(const BiphotonAmplitude& state, int conditioned_photon);

// Marginal |psi|^2 integrated over the other photon's axis, unit-area.
Distribution1D marginal_distribution(const BiphotonAmplitude& state, int photon);

// W(a, -a) = sum_b conj(psi(a, b)) psi(-a, b) * db on photon 1's axis.
CrossSpectralSlice cross_spectral_density(const BiphotonAmplitude& state);

// Tests psi*(a,b) psi(-a,b) proportional to |psi(a,0) psi(0,b)|^2 over the mask
// |RHS| > mask_eps * max|RHS|; satisfied iff the relative dispersion of the
// ratio is below tol.
ConditionReport check_factorization_condition(const BiphotonAmplitude& state, double tol = 1e-3,
                                              double mask_eps = 1e-4);

// sqrt(<a^2> - <a>^2) by grid quadrature; requires a unit-area distribution.
double standard_deviation(const Distribution1D& dist);

// U = dx * dp in units of hbar.
double uncertainty_product(double dx, double dp);

struct EprWitness {
    bool violates = false;
    double margin = 0.0;  // 0.5 - U, in hbar
};

// Violation of U >= 0.5 hbar witnesses position-momentum entanglement.
EprWitness epr_witness(double u);

// Two-photon spatial Schmidt number of the full transverse state. The state
// factorizes as x (x) y with identical per-axis amplitudes, so this is the
// square of the per-axis K = (tr rho)^2 / tr(rho^2), evaluated from the Gram
// traces of the sampled matrix (no SVD needed).
double schmidt_number(const BiphotonAmplitude& state);

// Closed forms for the double-Gaussian family, used as oracles against the
// sampled pipeline. hbar = 1, momenta in hbar/um.
namespace analytic {

double conditional_sigma_x(const DoubleGaussianParams& p);  // sigma_p sigma_- / sqrt(sum sq)
double conditional_sigma_p(const DoubleGaussianParams& p);  // 1 / sqrt(sum sq)
double marginal_sigma_x(const DoubleGaussianParams& p);
double marginal_sigma_p(const DoubleGaussianParams& p);
double uncertainty_product_theory(const DoubleGaussianParams& p);
double schmidt_number(const DoubleGaussianParams& p);  // ((r + 1/r)/2)^2, r = sigma_p/sigma_-

}  // namespace analytic

}  // namespace epr
