#include "arw/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

namespace arw {

namespace {

long long pow_ll(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void check_grid_args(const Eigenfunction& f, int M) {
    if (f.freqset.multiplicity() == 0)
        throw std::invalid_argument("evaluate_grid: empty frequency set");
    if (M < 2) throw std::invalid_argument("evaluate_grid: M must be >= 2");
    if (f.freqset.dim > 4) throw std::invalid_argument("evaluate_grid: dim > 4 not supported");
}

// fftw_plan creation is not thread safe; execution on private buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan cached_backward_plan(int dim, int M, fftw_complex* in, fftw_complex* out) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    const auto key = std::make_pair(dim, M);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<int> dims(dim, M);
    fftw_plan plan = fftw_plan_dft(dim, dims.data(), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("evaluate_grid: fftw planning failed");
    cache[key] = plan;
    return plan;
}

struct FftwBuffer {
    explicit FftwBuffer(long long n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

}  // namespace

namespace detail {

Grid grid_direct_reference(const Eigenfunction& f, int M) {
    check_grid_args(f, M);
    const auto& fs = f.freqset;
    const int d = fs.dim;
    const double amp = std::sqrt(2.0 / fs.multiplicity());
    Grid g{d, M, std::vector<double>(pow_ll(M, d), 0.0)};
    std::vector<int> k(d, 0);
    for (long long idx = 0; idx < g.count(); ++idx) {
        double val = 0;
        for (size_t i = 0; i < fs.half_set.size(); ++i) {
            const auto& lam = fs.half_set[i];
            double th = 0;
            for (int j = 0; j < d; ++j) th += lam[j] * (static_cast<double>(k[j]) / M);
            th *= 2 * kPi;
            val += f.b[static_cast<Eigen::Index>(i)] * std::cos(th) -
                   f.c[static_cast<Eigen::Index>(i)] * std::sin(th);
        }
        g.values[idx] = amp * val;
        for (int j = d - 1; j >= 0; --j) {
            if (++k[j] < M) break;
            k[j] = 0;
        }
    }
    return g;
}

Grid grid_direct(const Eigenfunction& f, int M, bool parallel) {
    check_grid_args(f, M);
    const auto& fs = f.freqset;
    const int d = fs.dim;
    const int half = static_cast<int>(fs.half_set.size());
    const double amp = std::sqrt(2.0 / fs.multiplicity());
    Grid g{d, M, std::vector<double>(pow_ll(M, d), 0.0)};

    // On the grid k/M every phase is a multiple of 2*pi/M, so one table of M
    // cosines covers every term exactly.
    std::vector<double> ct(M), st(M);
    for (int t = 0; t < M; ++t) {
        ct[t] = std::cos(2 * kPi * t / M);
        st[t] = std::sin(2 * kPi * t / M);
    }
    std::vector<int> lam_mod(static_cast<size_t>(half) * d);
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < d; ++j)
            lam_mod[static_cast<size_t>(i) * d + j] = ((fs.half_set[i][j] % M) + M) % M;

    const long long rows = pow_ll(M, d - 1);
#pragma omp parallel for schedule(static) if (parallel)
    for (long long r = 0; r < rows; ++r) {
        double* row = g.values.data() + r * M;
        // decode the leading d-1 grid indices of this row
        int k[4] = {0, 0, 0, 0};
        long long rest = r;
        for (int j = d - 2; j >= 0; --j) {
            k[j] = static_cast<int>(rest % M);
            rest /= M;
        }
        for (int i = 0; i < half; ++i) {
            const int* lm = lam_mod.data() + static_cast<size_t>(i) * d;
            int base = 0;
            for (int j = 0; j < d - 1; ++j) base = (base + lm[j] * k[j]) % M;
            const int step = lm[d - 1];
            const double bi = amp * f.b[i];
            const double ci = amp * f.c[i];
            int t = base;
            for (int col = 0; col < M; ++col) {
                row[col] += bi * ct[t] - ci * st[t];
                t += step;
                if (t >= M) t -= M;
            }
        }
    }
    return g;
}

Grid grid_spectral(const Eigenfunction& f, int M) {
    check_grid_args(f, M);
    const auto& fs = f.freqset;
    const int d = fs.dim;
    const long long rt = isqrt_floor(fs.energy);
    if (M <= 2 * rt)
        throw std::invalid_argument(
            "evaluate_grid: aliasing risk, spectral backend needs M >= 2*floor(sqrt(E))+1");
    const long long n = pow_ll(M, d);
    const double amp = std::sqrt(2.0 / fs.multiplicity());

    FftwBuffer in(n), out(n);
    for (long long i = 0; i < n; ++i) in.data[i][0] = in.data[i][1] = 0.0;
    for (size_t i = 0; i < fs.half_set.size(); ++i) {
        const auto& lam = fs.half_set[i];
        long long pos = 0, neg = 0;
        for (int j = 0; j < d; ++j) {
            pos = pos * M + ((lam[j] % M) + M) % M;
            neg = neg * M + ((-lam[j] % M) + M) % M;
        }
        // b cos - c sin == Re[(b + i c) e^{i theta}]
        const double re = 0.5 * amp * f.b[static_cast<Eigen::Index>(i)];
        const double im = 0.5 * amp * f.c[static_cast<Eigen::Index>(i)];
        in.data[pos][0] += re;
        in.data[pos][1] += im;
        in.data[neg][0] += re;
        in.data[neg][1] -= im;
    }
    fftw_plan plan = cached_backward_plan(d, M, in.data, out.data);
    fftw_execute_dft(plan, in.data, out.data);

    Grid g{d, M, std::vector<double>(n)};
    for (long long i = 0; i < n; ++i) g.values[i] = out.data[i][0];
    return g;
}

}  // namespace detail

Grid evaluate_grid(const Eigenfunction& f, int M, GridBackend backend) {
    return backend == GridBackend::spectral ? detail::grid_spectral(f, M)
                                            : detail::grid_direct(f, M, true);
}

}  // namespace arw
