#pragma once

#include <vector>

namespace arw {

using LatticePoint = std::vector<int>;

// Lambda_E = { lambda in Z^d : |lambda|^2 = E }. The eigenvalue is 4*pi^2*E and
// the multiplicity N = |Lambda_E| is the eigenspace dimension.
struct FrequencySet {
    int dim = 0;
    long long energy = 0;
    std::vector<LatticePoint> frequencies;  // all of Lambda, lexicographic
    std::vector<LatticePoint> half_set;     // one of each {l,-l}; first nonzero coord > 0

    int multiplicity() const { return static_cast<int>(frequencies.size()); }
};

// One orbit of the signed-permutation group W_d.
struct Orbit {
    LatticePoint representative;        // nonnegative coordinates, sorted ascending
    std::vector<LatticePoint> members;  // distinct signed permutations, lexicographic
};

long long isqrt_floor(long long n);

FrequencySet enumerate_frequencies(int dim, long long energy);

// N(E) for d=2 from the prime decomposition: E = 2^a * prod p^b * prod q^c with
// p = 1 (mod 4), q = 3 (mod 4); N = 4*prod(b+1) when all c are even, else 0.
long long multiplicity_formula_d2(long long energy);

std::vector<Orbit> orbit_decomposition(const FrequencySet& fs);

std::vector<LatticePoint> signed_permutations(const LatticePoint& v);
bool is_wd_invariant(const std::vector<LatticePoint>& subset);

// M[j][k] = sum_{lambda in subset} lambda_j*lambda_k in exact integer arithmetic.
// For a W_d-invariant subset this equals (|subset|*E/d) * Identity.
std::vector<std::vector<long long>> moment_matrix(const std::vector<LatticePoint>& subset,
                                                  int dim, long long energy);

}  // namespace arw
