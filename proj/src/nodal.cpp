#include "arw/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace arw {

int default_grid(long long energy) {
    return static_cast<int>(std::max<long long>(64, 16 * isqrt_floor(energy)));
}

namespace detail {

Grid offset_grid(const Eigenfunction& f, int M) {
    Vec shift = Vec::Constant(f.freqset.dim, 0.5 / M);
    return evaluate_grid(translate(f, shift), M, GridBackend::spectral);
}

namespace {

struct Pt2 {
    double x, y;
};

inline double seg(const Pt2& p, const Pt2& q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Cell-local crossing points; corners 00,10,11,01 with edges
// B(00-10), R(10-11), T(01-11), L(00-01), everything in cell units.
double marching_length_2d(const Grid& g, const Eigenfunction& f, bool parallel,
                          std::vector<double>* mesh) {
    const int M = g.size;
    const double h = 1.0 / M;
    const double* v = g.values.data();
    std::vector<double> row_len(M, 0.0);
    std::vector<std::vector<double>> row_mesh(mesh ? M : 0);

#pragma omp parallel for schedule(static) if (parallel)
    for (int k1 = 0; k1 < M; ++k1) {
        double acc = 0;
        std::vector<double>* rm = mesh ? &row_mesh[k1] : nullptr;
        const int k1n = (k1 + 1) % M;
        for (int k2 = 0; k2 < M; ++k2) {
            const int k2n = (k2 + 1) % M;
            const double f00 = v[static_cast<size_t>(k1) * M + k2];
            const double f10 = v[static_cast<size_t>(k1n) * M + k2];
            const double f01 = v[static_cast<size_t>(k1) * M + k2n];
            const double f11 = v[static_cast<size_t>(k1n) * M + k2n];
            const int c = (f00 < 0 ? 1 : 0) | (f10 < 0 ? 2 : 0) | (f11 < 0 ? 4 : 0) |
                          (f01 < 0 ? 8 : 0);
            if (c == 0 || c == 15) continue;
            const Pt2 B{f00 / (f00 - f10), 0.0};
            const Pt2 R{1.0, f10 / (f10 - f11)};
            const Pt2 T{f01 / (f01 - f11), 1.0};
            const Pt2 L{0.0, f00 / (f00 - f01)};
            Pt2 segs[2][2];
            int nseg = 0;
            switch (c) {
                case 1: case 14: segs[nseg][0] = B; segs[nseg][1] = L; ++nseg; break;
                case 2: case 13: segs[nseg][0] = B; segs[nseg][1] = R; ++nseg; break;
                case 4: case 11: segs[nseg][0] = R; segs[nseg][1] = T; ++nseg; break;
                case 8: case 7:  segs[nseg][0] = T; segs[nseg][1] = L; ++nseg; break;
                case 3: case 12: segs[nseg][0] = L; segs[nseg][1] = R; ++nseg; break;
                case 6: case 9:  segs[nseg][0] = B; segs[nseg][1] = T; ++nseg; break;
                case 5: case 10: {
                    Vec center(2);
                    center[0] = static_cast<double>(k1 + 1) / M;
                    center[1] = static_cast<double>(k2 + 1) / M;
                    const bool center_neg = evaluate_value(f, center) < 0;
                    // negative corners on the main diagonal (case 5): a negative
                    // center joins them into a band, isolating the two positive
                    // corners; case 10 is the mirrored situation.
                    const bool band = (c == 5) ? center_neg : !center_neg;
                    if (band) {
                        segs[0][0] = B; segs[0][1] = R;
                        segs[1][0] = T; segs[1][1] = L;
                    } else {
                        segs[0][0] = B; segs[0][1] = L;
                        segs[1][0] = R; segs[1][1] = T;
                    }
                    nseg = 2;
                    break;
                }
                default: break;
            }
            for (int s = 0; s < nseg; ++s) {
                acc += seg(segs[s][0], segs[s][1]);
                if (rm) {
                    rm->push_back((k1 + 0.5 + segs[s][0].x) * h);
                    rm->push_back((k2 + 0.5 + segs[s][0].y) * h);
                    rm->push_back((k1 + 0.5 + segs[s][1].x) * h);
                    rm->push_back((k2 + 0.5 + segs[s][1].y) * h);
                }
            }
        }
        row_len[k1] = acc;
    }
    double total = 0;
    for (int k1 = 0; k1 < M; ++k1) total += row_len[k1];
    if (mesh)
        for (auto& rm : row_mesh) mesh->insert(mesh->end(), rm.begin(), rm.end());
    return h * total;
}

struct Pt3 {
    double x[3];
};

inline Pt3 edge_crossing(const Pt3& p, const Pt3& q, double vp, double vq) {
    const double w = vp / (vp - vq);
    return {{p.x[0] + w * (q.x[0] - p.x[0]), p.x[1] + w * (q.x[1] - p.x[1]),
             p.x[2] + w * (q.x[2] - p.x[2])}};
}

inline double tri_area(const Pt3& a, const Pt3& b, const Pt3& c) {
    const double u[3] = {b.x[0] - a.x[0], b.x[1] - a.x[1], b.x[2] - a.x[2]};
    const double w[3] = {c.x[0] - a.x[0], c.x[1] - a.x[1], c.x[2] - a.x[2]};
    const double cx = u[1] * w[2] - u[2] * w[1];
    const double cy = u[2] * w[0] - u[0] * w[2];
    const double cz = u[0] * w[1] - u[1] * w[0];
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

// Six tetrahedra per cube sharing the 0-7 diagonal; corner ids use bit order
// (axis0, axis1, axis2).
constexpr int kTets[6][4] = {{0, 4, 6, 7}, {0, 4, 5, 7}, {0, 2, 6, 7},
                             {0, 2, 3, 7}, {0, 1, 5, 7}, {0, 1, 3, 7}};

double marching_area_3d(const Grid& g, bool parallel, std::vector<double>* mesh) {
    const int M = g.size;
    const double h = 1.0 / M;
    const double* v = g.values.data();
    const long long MM = static_cast<long long>(M) * M;
    std::vector<double> slab_area(M, 0.0);
    std::vector<std::vector<double>> slab_mesh(mesh ? M : 0);

#pragma omp parallel for schedule(static) if (parallel)
    for (int k1 = 0; k1 < M; ++k1) {
        double acc = 0;
        std::vector<double>* sm = mesh ? &slab_mesh[k1] : nullptr;
        const int k1n = (k1 + 1) % M;
        for (int k2 = 0; k2 < M; ++k2) {
            const int k2n = (k2 + 1) % M;
            for (int k3 = 0; k3 < M; ++k3) {
                const int k3n = (k3 + 1) % M;
                double cv[8];
                Pt3 cp[8];
                for (int id = 0; id < 8; ++id) {
                    const int i1 = (id >> 2) & 1, i2 = (id >> 1) & 1, i3 = id & 1;
                    const int a = i1 ? k1n : k1;
                    const int b = i2 ? k2n : k2;
                    const int cc = i3 ? k3n : k3;
                    cv[id] = v[a * MM + static_cast<long long>(b) * M + cc];
                    cp[id] = {{static_cast<double>(i1), static_cast<double>(i2),
                               static_cast<double>(i3)}};
                }
                int allneg = 1, allpos = 1;
                for (double x : cv) (x < 0 ? allpos : allneg) = 0;
                if (allneg || allpos) continue;
                for (const auto& tet : kTets) {
                    int neg[4], pos[4], nn = 0, np = 0;
                    for (int t = 0; t < 4; ++t)
                        (cv[tet[t]] < 0 ? neg[nn++] : pos[np++]) = tet[t];
                    if (nn == 0 || nn == 4) continue;
                    Pt3 tri[4];
                    int ntri = 0;
                    Pt3 quad[4];
                    if (nn == 1 || nn == 3) {
                        const int lone = nn == 1 ? neg[0] : pos[0];
                        const int* rest = nn == 1 ? pos : neg;
                        for (int t = 0; t < 3; ++t)
                            tri[t] = edge_crossing(cp[lone], cp[rest[t]], cv[lone], cv[rest[t]]);
                        ntri = 1;
                    } else {
                        quad[0] = edge_crossing(cp[neg[0]], cp[pos[0]], cv[neg[0]], cv[pos[0]]);
                        quad[1] = edge_crossing(cp[neg[0]], cp[pos[1]], cv[neg[0]], cv[pos[1]]);
                        quad[2] = edge_crossing(cp[neg[1]], cp[pos[1]], cv[neg[1]], cv[pos[1]]);
                        quad[3] = edge_crossing(cp[neg[1]], cp[pos[0]], cv[neg[1]], cv[pos[0]]);
                        ntri = 2;
                    }
                    const double base[3] = {k1 + 0.5, k2 + 0.5, k3 + 0.5};
                    const auto emit = [&](const Pt3& a, const Pt3& b, const Pt3& c) {
                        acc += tri_area(a, b, c);
                        if (sm)
                            for (const Pt3* p : {&a, &b, &c})
                                for (int j = 0; j < 3; ++j)
                                    sm->push_back((base[j] + p->x[j]) * h);
                    };
                    if (ntri == 1) {
                        emit(tri[0], tri[1], tri[2]);
                    } else {
                        emit(quad[0], quad[1], quad[2]);
                        emit(quad[0], quad[2], quad[3]);
                    }
                }
            }
        }
        slab_area[k1] = acc;
    }
    double total = 0;
    for (int k1 = 0; k1 < M; ++k1) total += slab_area[k1];
    if (mesh)
        for (auto& sm : slab_mesh) mesh->insert(mesh->end(), sm.begin(), sm.end());
    return h * h * total;
}

}  // namespace

double marching_measure(const Grid& g, const Eigenfunction& f, bool parallel,
                        std::vector<double>* mesh) {
    if (g.dim == 2) return marching_length_2d(g, f, parallel, mesh);
    return marching_area_3d(g, parallel, mesh);
}

double smoothed_measure(const Eigenfunction& f, double epsilon, int M, bool parallel) {
    const auto& fs = f.freqset;
    const int d = fs.dim;
    const int half = static_cast<int>(fs.half_set.size());
    const double amp = std::sqrt(2.0 / fs.multiplicity());

    // Midpoint nodes (k+1/2)/M; every phase is a multiple of pi/M.
    const int T = 2 * M;
    std::vector<double> ct(T), st(T);
    for (int t = 0; t < T; ++t) {
        ct[t] = std::cos(kPi * t / M);
        st[t] = std::sin(kPi * t / M);
    }
    std::vector<int> lam_mod(static_cast<size_t>(half) * d);
    std::vector<double> lam_d(static_cast<size_t>(half) * d);
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < d; ++j) {
            lam_mod[static_cast<size_t>(i) * d + j] = ((fs.half_set[i][j] % T) + T) % T;
            lam_d[static_cast<size_t>(i) * d + j] = fs.half_set[i][j];
        }

    long long rows = 1;
    for (int j = 0; j < d - 1; ++j) rows *= M;
    std::vector<double> row_sum(rows, 0.0);

#pragma omp parallel for schedule(static) if (parallel)
    for (long long r = 0; r < rows; ++r) {
        int k[4] = {0, 0, 0, 0};
        long long rest = r;
        for (int j = d - 2; j >= 0; --j) {
            k[j] = static_cast<int>(rest % M);
            rest /= M;
        }
        double acc = 0;
        for (int col = 0; col < M; ++col) {
            k[d - 1] = col;
            double val = 0;
            double grad[4] = {0, 0, 0, 0};
            for (int i = 0; i < half; ++i) {
                const int* lm = lam_mod.data() + static_cast<size_t>(i) * d;
                const double* ld = lam_d.data() + static_cast<size_t>(i) * d;
                long long t = 0;
                for (int j = 0; j < d; ++j) t += static_cast<long long>(lm[j]) * (2 * k[j] + 1);
                const int ti = static_cast<int>(t % T);
                const double a = f.b[i] * ct[ti] - f.c[i] * st[ti];
                const double da = -f.b[i] * st[ti] - f.c[i] * ct[ti];
                val += a;
                for (int j = 0; j < d; ++j) grad[j] += da * ld[j];
            }
            val *= amp;
            if (std::abs(val) <= epsilon) {
                double g2 = 0;
                for (int j = 0; j < d; ++j) g2 += grad[j] * grad[j];
                acc += std::sqrt(g2);
            }
        }
        row_sum[r] = acc;
    }
    double total = 0;
    for (long long r = 0; r < rows; ++r) total += row_sum[r];
    double cells = 1;
    for (int j = 0; j < d; ++j) cells *= M;
    return total * amp * 2 * kPi / (2 * epsilon * cells);
}

}  // namespace detail

NodalEstimate nodal_volume_marching(const Eigenfunction& f, int M, std::vector<double>* mesh) {
    const int d = f.freqset.dim;
    if (d != 2 && d != 3)
        throw std::invalid_argument("nodal_volume_marching: unsupported dimension (d must be 2 or 3)");
    const long long rt = isqrt_floor(f.freqset.energy);
    if (M < 4 * rt)
        throw std::invalid_argument("nodal_volume_marching: under-resolved, need M >= 4*floor(sqrt(E))");
    const Grid coarse = detail::offset_grid(f, M);
    const double v0 = detail::marching_measure(coarse, f, true, nullptr);
    const Grid fine = detail::offset_grid(f, 2 * M);
    const double v1 = detail::marching_measure(fine, f, true, mesh);
    return {v1, NodalMethod::marching, M, std::nullopt, std::abs(v1 - v0)};
}

NodalEstimate nodal_volume_smoothed(const Eigenfunction& f, double epsilon, int M) {
    if (epsilon <= 0) throw std::invalid_argument("nodal_volume_smoothed: epsilon must be > 0");
    const long long rt = isqrt_floor(f.freqset.energy);
    if (M < 4 * rt)
        throw std::invalid_argument("nodal_volume_smoothed: under-resolved, need M >= 4*floor(sqrt(E))");
    const double v = detail::smoothed_measure(f, epsilon, M, true);
    return {v, NodalMethod::smoothed, M, epsilon, 0.0};
}

double TrigPoly1D::eval(double t) const {
    double s = a0;
    for (size_t k = 0; k < a.size(); ++k) {
        const double th = 2 * kPi * static_cast<double>(k + 1) * t;
        s += a[k] * std::cos(th) + b[k] * std::sin(th);
    }
    return s;
}

double TrigPoly1D::deriv(double t) const {
    double s = 0;
    for (size_t k = 0; k < a.size(); ++k) {
        const double w = 2 * kPi * static_cast<double>(k + 1);
        const double th = w * t;
        s += -a[k] * w * std::sin(th) + b[k] * w * std::cos(th);
    }
    return s;
}

double crossing_functional_1d(const TrigPoly1D& g, double epsilon, long long quad_points) {
    if (epsilon <= 0) throw std::invalid_argument("crossing_functional_1d: epsilon must be > 0");
    if (quad_points <= 0)
        quad_points = std::max<long long>(65536, 64LL * std::max(1, g.degree()));
    double acc = 0;
    for (long long i = 0; i < quad_points; ++i) {
        const double t = (i + 0.5) / static_cast<double>(quad_points);
        if (std::abs(g.eval(t)) <= epsilon) acc += std::abs(g.deriv(t));
    }
    return acc / (2 * epsilon * static_cast<double>(quad_points));
}

Eigenfunction make_separable_eigenfunction(int dim, int m, SeparableKind kind) {
    if (dim < 1) throw std::invalid_argument("make_separable_eigenfunction: dim must be >= 1");
    if (m < 1) throw std::invalid_argument("make_separable_eigenfunction: m must be >= 1");
    const long long energy = kind == SeparableKind::single_sine
                                 ? static_cast<long long>(m) * m
                                 : static_cast<long long>(dim) * m * m;
    FrequencySet fs = enumerate_frequencies(dim, energy);

    // Expand into sum_lambda a_lambda e^{2 pi i <lambda,x>} with a_{-l} = conj(a_l).
    std::map<LatticePoint, std::complex<double>> coeffs;
    const std::complex<double> half_over_i(0.0, -0.5);  // 1/(2i)
    if (kind == SeparableKind::single_sine) {
        LatticePoint l(dim, 0);
        l[0] = m;
        coeffs[l] = half_over_i;
        for (auto& x : l) x = -x;
        coeffs[l] = std::conj(half_over_i);
    } else {
        std::map<LatticePoint, std::complex<double>> acc;
        acc[LatticePoint(dim, 0)] = 1.0;
        for (int j = 0; j < dim; ++j) {
            std::map<LatticePoint, std::complex<double>> next;
            for (const auto& [l, v] : acc) {
                LatticePoint lp = l, lm = l;
                lp[j] += m;
                lm[j] -= m;
                next[lp] += v * half_over_i;
                next[lm] -= v * half_over_i;
            }
            acc.swap(next);
        }
        coeffs.swap(acc);
    }

    std::map<LatticePoint, size_t> index;
    for (size_t i = 0; i < fs.half_set.size(); ++i) index[fs.half_set[i]] = i;

    Eigenfunction f;
    f.freqset = fs;
    f.b = Vec::Zero(static_cast<Eigen::Index>(fs.half_set.size()));
    f.c = Vec::Zero(static_cast<Eigen::Index>(fs.half_set.size()));
    const double scale_to_basis = std::sqrt(fs.multiplicity() / 2.0);
    for (const auto& [l, v] : coeffs) {
        bool in_half = false;
        for (int x : l) {
            if (x > 0) { in_half = true; break; }
            if (x < 0) break;
        }
        if (!in_half) continue;  // the conjugate pair carries the same data
        const auto it = index.find(l);
        if (it == index.end())
            throw std::logic_error("make_separable_eigenfunction: frequency not in lattice");
        f.b[static_cast<Eigen::Index>(it->second)] = 2 * v.real() * scale_to_basis;
        f.c[static_cast<Eigen::Index>(it->second)] = 2 * v.imag() * scale_to_basis;
    }
    return f;
}

}  // namespace arw
