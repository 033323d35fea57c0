#pragma once

#include <vector>

#include "arw/ensemble.hpp"

namespace arw {

enum class GridBackend { direct, spectral };

// Row-major values of f on the regular grid k/M, k in {0..M-1}^d.
struct Grid {
    int dim = 0;
    int size = 0;  // M, points per axis
    std::vector<double> values;

    long long count() const { return static_cast<long long>(values.size()); }
};

// Samples f(k/M) on the full grid. The spectral backend places the coefficient
// pairs on an M^d frequency grid and applies one inverse DFT; it requires
// M >= 2*floor(sqrt(E)) + 1 so no two frequencies collide modulo M.
Grid evaluate_grid(const Eigenfunction& f, int M, GridBackend backend);

namespace detail {

// Plain per-point summation with libm cosines; the slow reference the other
// backends are checked against.
Grid grid_direct_reference(const Eigenfunction& f, int M);

// Phase-table direct evaluation; OpenMP over rows when parallel is set.
// Thread count never changes the result (rows are independent).
Grid grid_direct(const Eigenfunction& f, int M, bool parallel);

Grid grid_spectral(const Eigenfunction& f, int M);

}  // namespace detail

}  // namespace arw
