#pragma once

#include <vector>

namespace epr {

enum class Basis { Position, Momentum };

const char* basis_name(Basis b);

// Uniform half-offset sampling axis. Sample i sits at (i - (n-1)/2) * spacing,
// so no sample lies at exactly zero and inversion a -> -a is the exact index
// flip i -> n-1-i. n must be even, spacing positive.
//
// Units: um in the position basis, hbar*rad/um in the momentum basis (hbar = 1
// internally, so x * p is a phase in radians).
struct Grid1D {
    int n = 0;
    double spacing = 0.0;
    Basis unit = Basis::Position;

    Grid1D() = default;
    Grid1D(int n_, double spacing_, Basis unit_);

    double coordinate(int i) const { return (i - 0.5 * (n - 1)) * spacing; }
    int mirror(int i) const { return n - 1 - i; }
    double extent() const { return 0.5 * n * spacing; }
    std::vector<double> coordinates() const;

    bool operator==(const Grid1D&) const = default;
};

// Conjugate axis with spacing' = 2*pi / (n * spacing); Delta_x * Delta_p * n = 2*pi*hbar.
Grid1D reciprocal_grid(const Grid1D& g);

}  // namespace epr
