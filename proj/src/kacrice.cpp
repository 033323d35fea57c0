#include "arw/kacrice.hpp"

#include <cmath>
#include <stdexcept>

#include "arw/calibration.hpp"
#include "arw/rng.hpp"

namespace arw {

namespace {

CovarianceBlocks assemble_blocks(int d, long long energy, const Vec& z, double u,
                                 const Vec& grad_u, const Mat& hess_u) {
    const double gscale = 4 * kPi * kPi * energy / d;
    CovarianceBlocks bl;
    bl.z = z;
    bl.u = u;
    bl.A = Mat::Identity(2, 2);
    bl.A(0, 1) = bl.A(1, 0) = u;
    bl.B = Mat::Zero(2, 2 * d);
    bl.B.block(0, d, 1, d) = -grad_u.transpose();
    bl.B.block(1, 0, 1, d) = grad_u.transpose();
    bl.C = Mat::Zero(2 * d, 2 * d);
    bl.C.topLeftCorner(d, d) = gscale * Mat::Identity(d, d);
    bl.C.bottomRightCorner(d, d) = gscale * Mat::Identity(d, d);
    bl.C.topRightCorner(d, d) = -hess_u;
    bl.C.bottomLeftCorner(d, d) = -hess_u;
    bl.Sigma = Mat::Zero(2 * d + 2, 2 * d + 2);
    bl.Sigma.topLeftCorner(2, 2) = bl.A;
    bl.Sigma.topRightCorner(2, 2 * d) = bl.B;
    bl.Sigma.bottomLeftCorner(2 * d, 2) = bl.B.transpose();
    bl.Sigma.bottomRightCorner(2 * d, 2 * d) = bl.C;

    const double om2 = 1.0 - u * u;
    if (std::abs(om2) < 1e-12)
        throw std::domain_error("covariance_blocks: degenerate separation, u^2 = 1");

    // Omega = C - B^T A^{-1} B with the Schur block written out explicitly.
    const Mat dd = grad_u * grad_u.transpose();
    bl.Omega = bl.C;
    bl.Omega.topLeftCorner(d, d) -= dd / om2;
    bl.Omega.bottomRightCorner(d, d) -= dd / om2;
    bl.Omega.topRightCorner(d, d) -= u * dd / om2;
    bl.Omega.bottomLeftCorner(d, d) -= u * dd / om2;

    bl.S = Mat::Zero(2 * d, 2 * d);
    bl.S.topLeftCorner(d, d) = dd / om2;
    bl.S.bottomRightCorner(d, d) = dd / om2;
    bl.S.topRightCorner(d, d) = hess_u + u * dd / om2;
    bl.S.bottomLeftCorner(d, d) = hess_u + u * dd / om2;
    bl.S /= gscale;

    Eigen::SelfAdjointEigenSolver<Mat> es(bl.S);
    bl.sigma_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    return bl;
}

}  // namespace

CovarianceBlocks covariance_blocks(const FrequencySet& fs, const Vec& z) {
    const TwoPointJet jet = two_point_jet(fs, z);
    return assemble_blocks(fs.dim, fs.energy, z, jet.u, jet.grad_u, jet.hess_u);
}

CovarianceBlocks synthetic_blocks(int dim, long long energy, double u, const Vec& grad_u,
                                  const Mat& hess_u) {
    return assemble_blocks(dim, energy, Vec::Zero(dim), u, grad_u, hess_u);
}

Mat sigma_matrix(const FrequencySet& fs, const Vec& z) {
    const TwoPointJet jet = two_point_jet(fs, z);
    const int d = fs.dim;
    const double gscale = 4 * kPi * kPi * fs.energy / d;
    Mat sigma = Mat::Zero(2 * d + 2, 2 * d + 2);
    sigma(0, 0) = sigma(1, 1) = 1.0;
    sigma(0, 1) = sigma(1, 0) = jet.u;
    sigma.block(0, d + 2, 1, d) = -jet.grad_u.transpose();
    sigma.block(1, 2, 1, d) = jet.grad_u.transpose();
    sigma.block(d + 2, 0, d, 1) = -jet.grad_u;
    sigma.block(2, 1, d, 1) = jet.grad_u;
    sigma.block(2, 2, d, d) = gscale * Mat::Identity(d, d);
    sigma.block(d + 2, d + 2, d, d) = gscale * Mat::Identity(d, d);
    sigma.block(2, d + 2, d, d) = -jet.hess_u;
    sigma.block(d + 2, 2, d, d) = -jet.hess_u;
    return sigma;
}

namespace detail {

void kernel_mc_moments(const Mat& sqrt_omega, long long n, std::uint64_t seed, bool parallel,
                       double& mean, double& m2) {
    const int td = static_cast<int>(sqrt_omega.rows());
    const int d = td / 2;
    std::vector<double> rows(static_cast<size_t>(td) * td);
    for (int j = 0; j < td; ++j)
        for (int k = 0; k < td; ++k) rows[static_cast<size_t>(j) * td + k] = sqrt_omega(j, k);
    constexpr long long kChunk = 8192;
    const long long nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> part_sum(nchunks, 0.0), part_sq(nchunks, 0.0);
    const CounterRng rng(seed, 0);

#pragma omp parallel for schedule(static) if (parallel)
    for (long long ci = 0; ci < nchunks; ++ci) {
        const long long lo = ci * kChunk;
        const long long hi = std::min(n, lo + kChunk);
        double zvec[8], vvec[8];
        double s = 0, sq = 0;
        for (long long i = lo; i < hi; ++i) {
            const std::uint64_t base = static_cast<std::uint64_t>(i) * td;
            for (int j = 0; j < td; ++j) zvec[j] = rng.normal(base + j);
            for (int j = 0; j < td; ++j) {
                double acc = 0;
                const double* rowp = rows.data() + static_cast<size_t>(j) * td;
                for (int k = 0; k < td; ++k) acc += rowp[k] * zvec[k];
                vvec[j] = acc;
            }
            double n1 = 0, n2 = 0;
            for (int j = 0; j < d; ++j) n1 += vvec[j] * vvec[j];
            for (int j = d; j < td; ++j) n2 += vvec[j] * vvec[j];
            const double w = std::sqrt(n1) * std::sqrt(n2);
            s += w;
            sq += w * w;
        }
        part_sum[ci] = s;
        part_sq[ci] = sq;
    }
    double s = 0, sq = 0;
    for (long long ci = 0; ci < nchunks; ++ci) {
        s += part_sum[ci];
        sq += part_sq[ci];
    }
    mean = s / static_cast<double>(n);
    m2 = sq / static_cast<double>(n);
}

}  // namespace detail

KernelEstimate kernel_K(const CovarianceBlocks& blocks, long long mc_samples,
                        std::uint64_t seed) {
    if (mc_samples < 2) throw std::invalid_argument("kernel_K: mc_samples must be >= 2");
    const double gscale = blocks.C(0, 0);  // 4 pi^2 E / d
    Eigen::SelfAdjointEigenSolver<Mat> es(blocks.Omega);
    if (es.eigenvalues().minCoeff() <= 1e-10 * gscale)
        throw std::domain_error("kernel_K: non-positive-definite omega");
    const Mat root = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                     es.eigenvectors().transpose();
    double mean = 0, m2 = 0;
    detail::kernel_mc_moments(root, mc_samples, seed, true, mean, m2);
    const double pref = 1.0 / (2 * kPi * std::sqrt(1.0 - blocks.u * blocks.u));
    const double var = std::max(0.0, m2 - mean * mean) *
                       static_cast<double>(mc_samples) / static_cast<double>(mc_samples - 1);
    KernelEstimate est;
    est.value = pref * mean;
    est.std_error = pref * std::sqrt(var / static_cast<double>(mc_samples));
    est.mc_samples = mc_samples;
    est.seed = seed;
    return est;
}

double dimensional_constant(int dim) {
    if (dim < 1) throw std::invalid_argument("dimensional_constant: dim must be >= 1");
    const double d = dim;
    return std::sqrt(4 * kPi / d) * std::tgamma((d + 1) / 2) / std::tgamma(d / 2);
}

double expected_volume(int dim, long long energy) {
    if (energy < 1) throw std::invalid_argument("expected_volume: energy must be >= 1");
    return dimensional_constant(dim) * std::sqrt(static_cast<double>(energy));
}

SecondMomentResult second_moment(const FrequencySet& fs, int M, long long mc_per_cell,
                                 std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("second_moment: M must be >= 1");
    const int d = fs.dim;
    long long cells = 1;
    for (int j = 0; j < d; ++j) cells *= M;
    const double cell_vol = 1.0 / static_cast<double>(cells);
    constexpr double kDegenerate = 1e-6;  // skip when u^2 > 1 - kDegenerate
    // The 1/sqrt(1-u^2) prefactor is integrable but steep; a flat midpoint
    // rule under-counts it near the finitely many u = +-1 points. Cells with
    // u^2 above the threshold are integrated on a sub-grid instead.
    constexpr double kRefineU2 = 0.5;
    constexpr int kSub = 8;

    std::vector<double> value(cells, 0.0), se(cells, 0.0);
    std::vector<unsigned char> skipped(cells, 0);
    std::vector<unsigned char> refined(cells, 0);
    std::vector<double> skip_bound(cells, 0.0);
    const double e_d = static_cast<double>(fs.energy);
    const auto bound_at = [&](double u2) {
        return calibration::kKernelBoundC * e_d / std::sqrt(std::max(1.0 - u2, 1e-12));
    };

#pragma omp parallel for schedule(dynamic, 16)
    for (long long ci = 0; ci < cells; ++ci) {
        Vec z(d);
        long long rest = ci;
        for (int j = d - 1; j >= 0; --j) {
            z[j] = (static_cast<double>(rest % M) + 0.5) / M;
            rest /= M;
        }
        const TwoPointJet jet = two_point_jet(fs, z);
        const double u2 = jet.u * jet.u;
        if (u2 > 1.0 - kDegenerate) {
            skipped[ci] = 1;
            skip_bound[ci] = bound_at(u2) * cell_vol;
            continue;
        }
        if (u2 <= kRefineU2) {
            try {
                const CovarianceBlocks bl =
                    assemble_blocks(d, fs.energy, z, jet.u, jet.grad_u, jet.hess_u);
                const KernelEstimate k =
                    kernel_K(bl, mc_per_cell, derive_seed(seed, static_cast<std::uint64_t>(ci)));
                value[ci] = k.value;
                se[ci] = k.std_error;
            } catch (const std::domain_error&) {
                skipped[ci] = 1;
                skip_bound[ci] = bound_at(u2) * cell_vol;
            }
            continue;
        }
        refined[ci] = 1;
        long long subs = 1;
        for (int j = 0; j < d; ++j) subs *= kSub;
        const long long mc_sub = std::max<long long>(mc_per_cell / (subs / 4), 4096);
        double acc = 0, acc_se2 = 0, acc_skip = 0;
        for (long long si = 0; si < subs; ++si) {
            Vec zs = z;
            long long srest = si;
            for (int j = d - 1; j >= 0; --j) {
                zs[j] += ((static_cast<double>(srest % kSub) + 0.5) / kSub - 0.5) / M;
                srest /= kSub;
            }
            const TwoPointJet js = two_point_jet(fs, zs);
            const double us2 = js.u * js.u;
            if (us2 > 1.0 - kDegenerate) {
                acc_skip += bound_at(us2) / static_cast<double>(subs);
                continue;
            }
            try {
                const CovarianceBlocks bl =
                    assemble_blocks(d, fs.energy, zs, js.u, js.grad_u, js.hess_u);
                const KernelEstimate k = kernel_K(
                    bl, mc_sub,
                    derive_seed(seed, static_cast<std::uint64_t>(ci), static_cast<std::uint64_t>(si)));
                acc += k.value / static_cast<double>(subs);
                acc_se2 += k.std_error * k.std_error /
                           (static_cast<double>(subs) * static_cast<double>(subs));
            } catch (const std::domain_error&) {
                acc_skip += bound_at(us2) / static_cast<double>(subs);
            }
        }
        value[ci] = acc;
        se[ci] = std::sqrt(acc_se2);
        skip_bound[ci] = acc_skip * cell_vol;  // partial-cell mass, reported not integrated
    }

    SecondMomentResult res;
    res.cells_total = cells;
    res.grid = M;
    res.mc_per_cell = mc_per_cell;
    res.seed = seed;
    double sum = 0, sq = 0, mass = 0;
    long long nskip = 0, nref = 0;
    for (long long ci = 0; ci < cells; ++ci) {
        nref += refined[ci];
        if (skipped[ci]) {
            ++nskip;
            mass += skip_bound[ci];
            continue;
        }
        sum += value[ci];
        sq += se[ci] * se[ci];
        mass += skip_bound[ci];
    }
    res.value = sum * cell_vol;
    res.std_error = std::sqrt(sq) * cell_vol;
    res.cells_skipped = nskip;
    res.cells_refined = nref;
    res.skipped_mass_bound = mass;
    return res;
}

SingularClassification classify_singular(const FrequencySet& fs, const Vec& x) {
    if (fs.multiplicity() == 0)
        throw std::invalid_argument("classify_singular: empty frequency set");
    const int d = fs.dim;
    long long npos = 0, nneg = 0;
    for (const auto& lam : fs.frequencies) {
        double th = 0;
        for (int j = 0; j < d; ++j) th += lam[j] * x[j];
        const double c = std::cos(2 * kPi * th);
        if (c > 0.75) ++npos;
        else if (c < -0.75) ++nneg;
    }
    const double n = fs.multiplicity();
    const double frac_pos = npos / n, frac_neg = nneg / n;
    const double threshold = 1.0 - 1.0 / (4 * d);
    SingularClassification out;
    if (frac_pos > threshold) {
        out.kind = SingularKind::positive;
        out.density_witness = frac_pos;
    } else if (frac_neg > threshold) {
        out.kind = SingularKind::negative;
        out.density_witness = frac_neg;
    } else {
        out.kind = SingularKind::nonsingular;
        out.density_witness = std::max(frac_pos, frac_neg);
    }
    return out;
}

double singular_set_measure(const FrequencySet& fs, int M) {
    if (M < 1) throw std::invalid_argument("singular_set_measure: M must be >= 1");
    const int d = fs.dim;
    long long cubes = 1;
    for (int j = 0; j < d; ++j) cubes *= M;
    std::vector<unsigned char> flagged(cubes, 0);
    constexpr std::uint64_t kProbeSeed = 0x51b0c4a17ull;  // fixed; results are part of the contract

#pragma omp parallel for schedule(static)
    for (long long ci = 0; ci < cubes; ++ci) {
        Vec center(d);
        long long rest = ci;
        for (int j = d - 1; j >= 0; --j) {
            center[j] = static_cast<double>(rest % M) / M;
            rest /= M;
        }
        bool hit = false;
        // center
        if (classify_singular(fs, center).kind != SingularKind::nonsingular) hit = true;
        // corners
        for (unsigned mask = 0; !hit && mask < (1u << d); ++mask) {
            Vec p = center;
            for (int j = 0; j < d; ++j) p[j] += ((mask >> j) & 1u ? 0.5 : -0.5) / M;
            if (classify_singular(fs, p).kind != SingularKind::nonsingular) hit = true;
        }
        // seeded interior probes
        const CounterRng rng(kProbeSeed, static_cast<std::uint64_t>(ci));
        for (int t = 0; !hit && t < 8; ++t) {
            Vec p = center;
            for (int j = 0; j < d; ++j)
                p[j] += (rng.uniform(static_cast<std::uint64_t>(t * d + j)) - 0.5) / M;
            if (classify_singular(fs, p).kind != SingularKind::nonsingular) hit = true;
        }
        flagged[ci] = hit ? 1 : 0;
    }
    long long nf = 0;
    for (long long ci = 0; ci < cubes; ++ci) nf += flagged[ci];
    return static_cast<double>(nf) / static_cast<double>(cubes);
}

double min_eig_sigma(const FrequencySet& fs, const Vec& x, const Vec& y) {
    const int d = fs.dim;
    Vec z(d);
    for (int j = 0; j < d; ++j) z[j] = x[j] - y[j];
    Mat sigma = sigma_matrix(fs, z);
    const double s = 1.0 / (2 * kPi * std::sqrt(static_cast<double>(fs.energy) / d));
    Vec scale = Vec::Ones(2 * d + 2);
    scale.tail(2 * d).setConstant(s);
    const Mat rescaled = scale.asDiagonal() * sigma * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Mat> es(rescaled);
    return es.eigenvalues().minCoeff();
}

}  // namespace arw
