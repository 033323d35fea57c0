#pragma once

#include <Eigen/Dense>
#include <boost/rational.hpp>
#include <cstdint>
#include <optional>

#include "arw/lattice.hpp"

namespace arw {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Random eigenfunction in the coefficient basis over Lambda/+-:
//   f(x) = sqrt(2/N) * sum_{lambda} [ b_lambda cos 2*pi<lambda,x>
//                                    - c_lambda sin 2*pi<lambda,x> ]
struct Eigenfunction {
    FrequencySet freqset;
    Vec b, c;  // length N/2, indexed like freqset.half_set
    std::optional<std::uint64_t> seed;
};

struct JetValue {
    double value = 0;
    Vec gradient;  // scale 2*pi*sqrt(E)
    Mat hessian;   // symmetric; trace = -4*pi^2*E*value
};

// Jet of the two-point function u(z) = E[f(x+z) f(x)].
struct TwoPointJet {
    double u = 0;  // in [-1,1]
    Vec grad_u;
    Mat hess_u;
};

// Independent N(0,1) draws for b,c from the counter stream keyed by seed.
Eigenfunction sample_eigenfunction(const FrequencySet& fs, std::uint64_t seed);

JetValue evaluate_jet(const Eigenfunction& f, const Vec& x);
double evaluate_value(const Eigenfunction& f, const Vec& x);

TwoPointJet two_point_jet(const FrequencySet& fs, const Vec& z);

// Exact integral of u^k over the torus (k = 2 or 4), by counting lattice
// tuples that sum to zero. Always 1/N for k=2.
boost::rational<long long> u_moment_exact(const FrequencySet& fs, int k);

// Coefficient transforms; all preserve the spectrum (hence the nodal volume
// distribution) and are used by the symmetry and gridding paths.
Eigenfunction translate(const Eigenfunction& f, const Vec& shift);        // f(x + shift)
Eigenfunction permute_coordinates(const Eigenfunction& f, const std::vector<int>& perm);
Eigenfunction reflect(const Eigenfunction& f);                            // f(-x)
Eigenfunction scale(const Eigenfunction& f, double factor);               // factor * f

}  // namespace arw
