#pragma once

#include <cstdint>

#include "arw/ensemble.hpp"

namespace arw {

// Covariance structure of (f(x), f(y), grad f(x), grad f(y)) at separation
// z = x - y, in terms of the two-point function u and its derivatives:
//   A = [[1,u],[u,1]],  B = [[0,-Du],[Du,0]],
//   C = [[(4 pi^2 E/d) I, -H],[-H, (4 pi^2 E/d) I]],
//   Sigma = [[A,B],[B^T,C]],  Omega = C - B^T A^{-1} B,
//   Omega = (4 pi^2 E/d)(I - S),  sigma_norm = spectral norm of S.
struct CovarianceBlocks {
    Vec z;
    double u = 0;
    Mat A, B, C, Sigma;
    Mat Omega, S;          // defined only when u^2 != 1
    double sigma_norm = 0;
};

CovarianceBlocks covariance_blocks(const FrequencySet& fs, const Vec& z);

// Assembles blocks from given (u, Du, H); for identity-case checks and tests.
CovarianceBlocks synthetic_blocks(int dim, long long energy, double u, const Vec& grad_u,
                                  const Mat& hess_u);

// Sigma(x,y) without the non-degeneracy requirement (valid at u = +-1 too).
Mat sigma_matrix(const FrequencySet& fs, const Vec& z);

struct KernelEstimate {
    double value = 0;  // units of E
    double std_error = 0;
    long long mc_samples = 0;
    std::uint64_t seed = 0;
};

// K(z) = (1-u^2)^{-1/2} E[ |v_1| |v_2| ] / (2 pi) for v ~ N(0, Omega), via a
// symmetric square root of Omega. With u = Du = H = 0 this is exactly I_d^2 E.
KernelEstimate kernel_K(const CovarianceBlocks& blocks, long long mc_samples,
                        std::uint64_t seed);

// I_d = sqrt(4 pi/d) Gamma((d+1)/2) / Gamma(d/2); expected volume is I_d sqrt(E).
double dimensional_constant(int dim);
double expected_volume(int dim, long long energy);

struct SecondMomentResult {
    double value = 0;      // estimate of the integral of K over the torus
    double std_error = 0;  // Monte Carlo part only
    long long cells_total = 0;
    long long cells_skipped = 0;        // degenerate (u^2 > 1 - delta) or non-PD cells
    long long cells_refined = 0;        // near-singular cells integrated on a sub-grid
    double skipped_mass_bound = 0;      // kernel-bound cap on what the skipped cells hold
    int grid = 0;
    long long mc_per_cell = 0;
    std::uint64_t seed = 0;
};

// Midpoint quadrature of K over the torus; cells with u^2 > 1 - 1e-6 are
// skipped and reported through the error budget instead of integrated, and
// cells with u^2 > 1/2 get a sub-grid so the steep prefactor is resolved.
SecondMomentResult second_moment(const FrequencySet& fs, int M, long long mc_per_cell,
                                 std::uint64_t seed);

enum class SingularKind { positive, negative, nonsingular };

struct SingularClassification {
    SingularKind kind = SingularKind::nonsingular;
    double density_witness = 0;  // fraction of Lambda meeting the cosine condition
};

// x is positive singular when cos 2 pi <lambda,x> > 3/4 on a subset of Lambda
// of density > 1 - 1/(4d); negative with cosine < -3/4.
SingularClassification classify_singular(const FrequencySet& fs, const Vec& x);

// Fraction of the M^d cubes (side 1/M, centered at k/M) containing a detected
// singular point; sampled at corners, center and 8 seeded interior points per
// cube, so the result is a lower bound on meas(B).
double singular_set_measure(const FrequencySet& fs, int M);

// Smallest eigenvalue of Sigma(x,y) after rescaling the gradient rows/columns
// by 1/(2 pi sqrt(E/d)); positive values certify non-degeneracy.
double min_eig_sigma(const FrequencySet& fs, const Vec& x, const Vec& y);

namespace detail {

// Chunked Monte Carlo mean of |v_1||v_2|, v = R * standard normal; partials
// are combined in fixed order so thread count cannot change the value.
void kernel_mc_moments(const Mat& sqrt_omega, long long n, std::uint64_t seed, bool parallel,
                       double& mean, double& m2);

}  // namespace detail

}  // namespace arw
