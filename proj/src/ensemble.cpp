#include "arw/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "arw/rng.hpp"

namespace arw {

namespace {

double amplitude(const FrequencySet& fs) { return std::sqrt(2.0 / fs.multiplicity()); }

// Pack a lattice point into a hashable 64-bit key (16 bits per coordinate).
std::uint64_t pack_point(const LatticePoint& l) {
    std::uint64_t key = 0;
    for (int x : l) key = (key << 16) | static_cast<std::uint16_t>(x + 32768);
    return key;
}

// Key of the point that would close the tuple: -(a+b+c).
std::uint64_t pack_closing(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
    std::uint64_t key = 0;
    for (size_t j = 0; j < a.size(); ++j) {
        const int x = -(a[j] + b[j] + c[j]);
        key = (key << 16) | static_cast<std::uint16_t>(x + 32768);
    }
    return key;
}

}  // namespace

Eigenfunction sample_eigenfunction(const FrequencySet& fs, std::uint64_t seed) {
    if (fs.multiplicity() == 0)
        throw std::invalid_argument("sample_eigenfunction: empty frequency set");
    const auto half = static_cast<Eigen::Index>(fs.half_set.size());
    Eigenfunction f;
    f.freqset = fs;
    f.b.resize(half);
    f.c.resize(half);
    f.seed = seed;
    const CounterRng rng(seed, 0);
    for (Eigen::Index i = 0; i < half; ++i) {
        f.b[i] = rng.normal(static_cast<std::uint64_t>(2 * i));
        f.c[i] = rng.normal(static_cast<std::uint64_t>(2 * i + 1));
    }
    return f;
}

JetValue evaluate_jet(const Eigenfunction& f, const Vec& x) {
    const auto& fs = f.freqset;
    const int d = fs.dim;
    const double amp = amplitude(fs);
    JetValue out;
    out.gradient = Vec::Zero(d);
    out.hessian = Mat::Zero(d, d);
    double val = 0;
    for (size_t i = 0; i < fs.half_set.size(); ++i) {
        const auto& lam = fs.half_set[i];
        double th = 0;
        for (int j = 0; j < d; ++j) th += lam[j] * x[j];
        th *= 2 * kPi;
        const double ct = std::cos(th), st = std::sin(th);
        const double a = f.b[static_cast<Eigen::Index>(i)] * ct -
                         f.c[static_cast<Eigen::Index>(i)] * st;
        const double da = -f.b[static_cast<Eigen::Index>(i)] * st -
                          f.c[static_cast<Eigen::Index>(i)] * ct;
        val += a;
        for (int j = 0; j < d; ++j) out.gradient[j] += da * lam[j];
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) out.hessian(j, k) -= a * lam[j] * lam[k];
    }
    out.value = amp * val;
    out.gradient *= amp * 2 * kPi;
    out.hessian *= amp * 4 * kPi * kPi;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < j; ++k) out.hessian(j, k) = out.hessian(k, j);
    return out;
}

double evaluate_value(const Eigenfunction& f, const Vec& x) {
    const auto& fs = f.freqset;
    const int d = fs.dim;
    double val = 0;
    for (size_t i = 0; i < fs.half_set.size(); ++i) {
        const auto& lam = fs.half_set[i];
        double th = 0;
        for (int j = 0; j < d; ++j) th += lam[j] * x[j];
        th *= 2 * kPi;
        val += f.b[static_cast<Eigen::Index>(i)] * std::cos(th) -
               f.c[static_cast<Eigen::Index>(i)] * std::sin(th);
    }
    return amplitude(fs) * val;
}

TwoPointJet two_point_jet(const FrequencySet& fs, const Vec& z) {
    if (fs.multiplicity() == 0)
        throw std::invalid_argument("two_point_jet: empty frequency set");
    const int d = fs.dim;
    const double n = fs.multiplicity();
    TwoPointJet out;
    out.grad_u = Vec::Zero(d);
    out.hess_u = Mat::Zero(d, d);
    double u = 0;
    for (const auto& lam : fs.half_set) {
        double th = 0;
        for (int j = 0; j < d; ++j) th += lam[j] * z[j];
        th *= 2 * kPi;
        const double ct = std::cos(th), st = std::sin(th);
        u += ct;
        for (int j = 0; j < d; ++j) out.grad_u[j] += st * lam[j];
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) out.hess_u(j, k) += ct * lam[j] * lam[k];
    }
    out.u = (2.0 / n) * u;
    out.grad_u *= -(4 * kPi / n);
    out.hess_u *= -(8 * kPi * kPi / n);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < j; ++k) out.hess_u(j, k) = out.hess_u(k, j);
    return out;
}

boost::rational<long long> u_moment_exact(const FrequencySet& fs, int k) {
    if (fs.multiplicity() == 0)
        throw std::invalid_argument("u_moment_exact: empty frequency set");
    if (k != 2 && k != 4) throw std::invalid_argument("u_moment_exact: k must be 2 or 4");
    const auto& lams = fs.frequencies;
    const long long n = fs.multiplicity();
    std::unordered_set<std::uint64_t> members;
    members.reserve(lams.size() * 2);
    for (const auto& l : lams) members.insert(pack_point(l));

    // int u^k = #{(mu_1..mu_k) in Lambda^k : sum mu_i = 0} / N^k
    long long count = 0;
    if (k == 2) {
        for (const auto& a : lams) {
            LatticePoint neg = a;
            for (auto& x : neg) x = -x;
            if (members.count(pack_point(neg))) ++count;
        }
        long long denom = n * n;
        return {count, denom};
    }
    for (const auto& a : lams)
        for (const auto& b : lams)
            for (const auto& c : lams)
                if (members.count(pack_closing(a, b, c))) ++count;
    long long denom = n * n * n * n;
    return {count, denom};
}

Eigenfunction translate(const Eigenfunction& f, const Vec& shift) {
    Eigenfunction g = f;
    const auto& fs = f.freqset;
    for (size_t i = 0; i < fs.half_set.size(); ++i) {
        const auto& lam = fs.half_set[i];
        double phi = 0;
        for (int j = 0; j < fs.dim; ++j) phi += lam[j] * shift[j];
        phi *= 2 * kPi;
        const double cp = std::cos(phi), sp = std::sin(phi);
        const auto idx = static_cast<Eigen::Index>(i);
        g.b[idx] = f.b[idx] * cp - f.c[idx] * sp;
        g.c[idx] = f.b[idx] * sp + f.c[idx] * cp;
    }
    return g;
}

Eigenfunction permute_coordinates(const Eigenfunction& f, const std::vector<int>& perm) {
    const auto& fs = f.freqset;
    const int d = fs.dim;
    if (static_cast<int>(perm.size()) != d)
        throw std::invalid_argument("permute_coordinates: permutation size mismatch");
    std::unordered_map<std::uint64_t, size_t> index;
    for (size_t i = 0; i < fs.half_set.size(); ++i) index[pack_point(fs.half_set[i])] = i;

    Eigenfunction g = f;
    // g(x) = f(x_{perm[0]}, ..., x_{perm[d-1]}); frequency lambda maps to mu
    // with mu[perm[j]] = lambda[j].
    for (size_t i = 0; i < fs.half_set.size(); ++i) {
        const auto& lam = fs.half_set[i];
        LatticePoint mu(d, 0);
        for (int j = 0; j < d; ++j) mu[perm[j]] = lam[j];
        double sign = 1.0;
        for (int x : mu) {
            if (x > 0) break;
            if (x < 0) {
                sign = -1.0;
                for (auto& y : mu) y = -y;
                break;
            }
        }
        const auto it = index.find(pack_point(mu));
        if (it == index.end())
            throw std::logic_error("permute_coordinates: frequency fell outside the lattice");
        const auto src = static_cast<Eigen::Index>(i);
        const auto dst = static_cast<Eigen::Index>(it->second);
        g.b[dst] = f.b[src];
        g.c[dst] = sign * f.c[src];
    }
    return g;
}

Eigenfunction reflect(const Eigenfunction& f) {
    Eigenfunction g = f;
    g.c = -f.c;
    return g;
}

Eigenfunction scale(const Eigenfunction& f, double factor) {
    Eigenfunction g = f;
    g.b *= factor;
    g.c *= factor;
    return g;
}

}  // namespace arw
