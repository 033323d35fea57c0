#pragma once

#include <optional>
#include <vector>

#include "arw/ensemble.hpp"
#include "arw/grid.hpp"

namespace arw {

enum class NodalMethod { marching, smoothed };

struct NodalEstimate {
    double volume = 0;  // length for d=2, area for d=3
    NodalMethod method = NodalMethod::marching;
    int grid_M = 0;  // base level; marching refines once to 2M and reports that value
    std::optional<double> epsilon;
    double refinement_error = 0;  // |V(2M) - V(M)| for marching, 0 for smoothed
};

// Grid policy: 16 cells per wavelength keeps the refined length error a few
// parts in 1e4, which the expectation experiments need.
int default_grid(long long energy);

// Zero-set extraction from the sampled grid: segments in d=2 (saddle cells
// decided by one direct evaluation at the cell center), triangles in d=3.
// Runs at M and 2M; the returned volume is the 2M value. mesh, when given,
// receives the fine-level primitives as flat coordinates (4 doubles per
// segment, 9 per triangle).
NodalEstimate nodal_volume_marching(const Eigenfunction& f, int M,
                                    std::vector<double>* mesh = nullptr);

// Z_eps(f) = (1/2eps) * integral of 1{|f|<=eps} |grad f|, midpoint rule on the
// M^d grid with term-wise jet gradients.
NodalEstimate nodal_volume_smoothed(const Eigenfunction& f, double epsilon, int M);

// One-variable trigonometric polynomial a0 + sum_k a_k cos 2*pi*k*t + b_k sin 2*pi*k*t.
struct TrigPoly1D {
    double a0 = 0;
    std::vector<double> a, b;  // index k-1 holds degree k

    int degree() const { return static_cast<int>(a.size()); }
    double eval(double t) const;
    double deriv(double t) const;
};

// (1/2eps) * integral over {|g|<=eps} of |g'|, dense midpoint quadrature.
// quad_points = 0 picks max(65536, 64*degree). Bounded by 6*degree.
double crossing_functional_1d(const TrigPoly1D& g, double epsilon, long long quad_points = 0);

enum class SeparableKind { single_sine, product_of_sines };

// sin 2*pi*m*x_1 (E = m^2) or prod_j sin 2*pi*m*x_j (E = d*m^2), expanded into
// the coefficient basis.
Eigenfunction make_separable_eigenfunction(int dim, int m, SeparableKind kind);

namespace detail {

// Measure of the zero set of the sampled field; grid vertices sit at
// (k+1/2)/M so the axis-aligned nodal sets of the separable cases never pass
// through a vertex. Deterministic for any thread count.
double marching_measure(const Grid& g, const Eigenfunction& f, bool parallel,
                        std::vector<double>* mesh);

double smoothed_measure(const Eigenfunction& f, double epsilon, int M, bool parallel);

Grid offset_grid(const Eigenfunction& f, int M);  // samples f((k+1/2)/M), spectral

}  // namespace detail

}  // namespace arw
