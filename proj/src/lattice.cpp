#include "arw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

namespace arw {

long long isqrt_floor(long long n) {
    if (n < 0) return -1;
    auto r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

namespace {

// Depth-first over coordinates in ascending order; the last coordinate is
// solved directly, so the cost is O((2*sqrt(E)+1)^(d-1)).
void enumerate_rec(int pos, int dim, long long remaining, LatticePoint& cur,
                   std::vector<LatticePoint>& out) {
    if (pos == dim - 1) {
        const long long r = isqrt_floor(remaining);
        if (r * r == remaining) {
            if (r == 0) {
                cur[pos] = 0;
                out.push_back(cur);
            } else {
                cur[pos] = static_cast<int>(-r);
                out.push_back(cur);
                cur[pos] = static_cast<int>(r);
                out.push_back(cur);
            }
        }
        return;
    }
    const long long r = isqrt_floor(remaining);
    for (long long v = -r; v <= r; ++v) {
        cur[pos] = static_cast<int>(v);
        enumerate_rec(pos + 1, dim, remaining - v * v, cur, out);
    }
}

}  // namespace

FrequencySet enumerate_frequencies(int dim, long long energy) {
    if (dim < 1) throw std::invalid_argument("enumerate_frequencies: dim must be >= 1");
    if (energy < 1) throw std::invalid_argument("enumerate_frequencies: energy must be >= 1");
    FrequencySet fs;
    fs.dim = dim;
    fs.energy = energy;
    LatticePoint cur(dim, 0);
    enumerate_rec(0, dim, energy, cur, fs.frequencies);
    std::sort(fs.frequencies.begin(), fs.frequencies.end());
    for (const auto& l : fs.frequencies) {
        for (int x : l) {
            if (x > 0) { fs.half_set.push_back(l); break; }
            if (x < 0) break;
        }
    }
    return fs;
}

long long multiplicity_formula_d2(long long energy) {
    if (energy < 1) throw std::invalid_argument("multiplicity_formula_d2: energy must be >= 1");
    long long n = energy;
    long long result = 4;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (p == 2) continue;
        if (p % 4 == 1) result *= (e + 1);
        else if (e % 2 != 0) return 0;
    }
    if (n > 1 && n != 2) {
        if (n % 4 == 1) result *= 2;
        else return 0;
    }
    return result;
}

std::vector<Orbit> orbit_decomposition(const FrequencySet& fs) {
    std::map<LatticePoint, std::vector<LatticePoint>> groups;
    for (const auto& l : fs.frequencies) {
        LatticePoint key = l;
        for (auto& x : key) x = std::abs(x);
        std::sort(key.begin(), key.end());
        groups[key].push_back(l);
    }
    std::vector<Orbit> orbits;
    orbits.reserve(groups.size());
    for (auto& [rep, members] : groups) orbits.push_back({rep, std::move(members)});
    return orbits;
}

std::vector<LatticePoint> signed_permutations(const LatticePoint& v) {
    LatticePoint base = v;
    for (auto& x : base) x = std::abs(x);
    std::sort(base.begin(), base.end());
    std::set<LatticePoint> out;
    do {
        std::vector<int> nz;
        for (size_t i = 0; i < base.size(); ++i)
            if (base[i] != 0) nz.push_back(static_cast<int>(i));
        for (unsigned m = 0; m < (1u << nz.size()); ++m) {
            LatticePoint w = base;
            for (size_t t = 0; t < nz.size(); ++t)
                if ((m >> t) & 1u) w[nz[t]] = -w[nz[t]];
            out.insert(w);
        }
    } while (std::next_permutation(base.begin(), base.end()));
    return {out.begin(), out.end()};
}

bool is_wd_invariant(const std::vector<LatticePoint>& subset) {
    std::set<LatticePoint> have(subset.begin(), subset.end());
    for (const auto& l : subset)
        for (const auto& w : signed_permutations(l))
            if (!have.count(w)) return false;
    return true;
}

std::vector<std::vector<long long>> moment_matrix(const std::vector<LatticePoint>& subset,
                                                  int dim, long long energy) {
    if (subset.empty()) throw std::invalid_argument("moment_matrix: subset must be nonempty");
    for (const auto& l : subset) {
        if (static_cast<int>(l.size()) != dim)
            throw std::invalid_argument("moment_matrix: member dimension mismatch");
        long long n2 = 0;
        for (int x : l) n2 += static_cast<long long>(x) * x;
        if (n2 != energy)
            throw std::invalid_argument("moment_matrix: member norm does not match energy");
    }
    if (!is_wd_invariant(subset))
        throw std::invalid_argument("moment_matrix: subset is not W_d-invariant");
    std::vector<std::vector<long long>> m(dim, std::vector<long long>(dim, 0));
    for (const auto& l : subset)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                m[j][k] += static_cast<long long>(l[j]) * l[k];
    return m;
}

}  // namespace arw
