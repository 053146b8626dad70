#pragma once

#include <stdexcept>
#include <string>

namespace epr {

// Grid spacing too coarse for the narrowest Gaussian scale of the state.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

// All-zero amplitude, empty evaluation mask, zero-mass distribution.
struct DegenerateStateError : std::runtime_error {
    explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

// Physically impossible forward-model input (e.g. W above the geometric-mean bound).
struct ModelInconsistencyError : std::runtime_error {
    explicit ModelInconsistencyError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace epr
