#include "epr/grid.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace epr {

const char* basis_name(Basis b) { return b == Basis::Position ? "position" : "momentum"; }

Grid1D::Grid1D(int n_, double spacing_, Basis unit_) : n(n_), spacing(spacing_), unit(unit_) {
    if (n <= 0 || n % 2 != 0)
        throw std::invalid_argument("Grid1D: sample count must be positive and even, got " +
                                    std::to_string(n));
    if (!(spacing > 0.0)) throw std::invalid_argument("Grid1D: spacing must be positive");
}

std::vector<double> Grid1D::coordinates() const {
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = coordinate(i);
    return c;
}

Grid1D reciprocal_grid(const Grid1D& g) {
    const Basis conj = g.unit == Basis::Position ? Basis::Momentum : Basis::Position;
    return Grid1D(g.n, 2.0 * std::numbers::pi / (g.n * g.spacing), conj);
}

}  // namespace epr
