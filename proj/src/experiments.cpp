#include "arw/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "arw/kacrice.hpp"
#include "arw/rng.hpp"

namespace arw {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
    if (cfg.samples_per_energy < 2)
        throw std::invalid_argument("experiment: samples_per_energy must be >= 2");
    if (cfg.energies.empty()) throw std::invalid_argument("experiment: no energies given");

    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRecord rec;
    rec.config = cfg;

    for (long long energy : cfg.energies) {
        const FrequencySet fs = enumerate_frequencies(cfg.dim, energy);
        if (fs.multiplicity() == 0)
            throw std::invalid_argument("experiment: energy " + std::to_string(energy) +
                                        " has empty frequency set");
        const int grid = cfg.grid_M > 0 ? cfg.grid_M : default_grid(energy);
        const long long n = cfg.samples_per_energy;
        const double sqrt_e = std::sqrt(static_cast<double>(energy));
        std::vector<SampleRow> rows(n);

#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < n; ++i) {
            const std::uint64_t seed = derive_seed(cfg.master_seed,
                                                   static_cast<std::uint64_t>(energy),
                                                   static_cast<std::uint64_t>(i));
            const Eigenfunction f = sample_eigenfunction(fs, seed);
            const NodalEstimate est = nodal_volume_marching(f, grid);
            rows[i] = {energy, i, seed, est.volume, est.volume / sqrt_e, grid,
                       est.refinement_error};
        }

        std::vector<double> zn(n);
        for (long long i = 0; i < n; ++i) zn[i] = rows[i].z_norm;
        const auto [mean, var] = mean_and_variance(zn);
        EnergySummary s;
        s.energy = energy;
        s.multiplicity = fs.multiplicity();
        s.samples = n;
        s.grid_M = grid;
        s.mean_norm = mean;
        s.var_norm = var;
        s.std_error = std::sqrt(var / static_cast<double>(n));
        s.var_sqrt_n = var * std::sqrt(static_cast<double>(fs.multiplicity()));
        s.var_n = var * static_cast<double>(fs.multiplicity());
        s.theory_mean = dimensional_constant(cfg.dim);
        rec.per_energy.push_back(s);
        rec.samples.insert(rec.samples.end(), rows.begin(), rows.end());
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace

std::pair<double, double> mean_and_variance(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double sum = 0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, xs.size() > 1 ? ss / (n - 1) : 0.0};
}

ExperimentRecord run_expectation(const ExperimentConfig& cfg) { return run_experiment(cfg); }

ExperimentRecord run_variance(const ExperimentConfig& cfg) {
    long long prev_n = 0;
    for (long long energy : cfg.energies) {
        const long long n = cfg.dim == 2 ? multiplicity_formula_d2(energy)
                                         : enumerate_frequencies(cfg.dim, energy).multiplicity();
        if (n <= prev_n)
            throw std::invalid_argument(
                "run_variance: energies must have strictly increasing multiplicity");
        prev_n = n;
    }
    return run_experiment(cfg);
}

std::string sample_csv(const ExperimentRecord& rec) {
    std::ostringstream os;
    os << "energy,sample_index,seed,Z,Z_normalized,grid_M,refinement_error\n";
    for (const auto& r : rec.samples) {
        os << r.energy << ',' << r.sample_index << ',' << r.seed << ',' << fmt_double(r.z)
           << ',' << fmt_double(r.z_norm) << ',' << r.grid_M << ','
           << fmt_double(r.refinement_error) << '\n';
    }
    return os.str();
}

namespace {

void add_check(VerifyReport& rep, const std::string& name, bool ok, const std::string& detail) {
    rep.checks.push_back({name, ok, detail});
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
    VerifyReport rep;
    const CounterRng rng(opts.seed, 0);

    // exact moment identities over every orbit and the full set
    {
        bool ok = true;
        std::string detail = "all exact";
        for (int d = 2; d <= 3 && ok; ++d) {
            const long long emax = d == 2 ? 200 : 50;
            for (long long e = 1; e <= emax && ok; ++e) {
                const FrequencySet fs = enumerate_frequencies(d, e);
                if (fs.multiplicity() == 0) continue;
                std::vector<std::vector<LatticePoint>> subsets{fs.frequencies};
                for (const auto& orb : orbit_decomposition(fs)) subsets.push_back(orb.members);
                for (const auto& sub : subsets) {
                    const auto m = moment_matrix(sub, d, e);
                    const long long want = static_cast<long long>(sub.size()) * e / d;
                    for (int j = 0; j < d && ok; ++j)
                        for (int k = 0; k < d && ok; ++k) {
                            const long long expect = j == k ? want : 0;
                            if (m[j][k] != expect) {
                                ok = false;
                                detail = "failed at d=" + std::to_string(d) +
                                         " E=" + std::to_string(e);
                            }
                        }
                }
            }
        }
        add_check(rep, "lattice moment identities (exact)", ok, detail);
    }

    // multiplicity formula against enumeration
    {
        bool ok = true;
        std::string detail = "E <= 2000";
        for (long long e = 1; e <= 2000; ++e) {
            if (multiplicity_formula_d2(e) != enumerate_frequencies(2, e).multiplicity()) {
                ok = false;
                detail = "mismatch at E=" + std::to_string(e);
                break;
            }
        }
        add_check(rep, "multiplicity formula vs enumeration", ok, detail);
    }

    // exact mean square of u
    {
        bool ok = true;
        std::string detail = "int u^2 = 1/N on both ladders";
        for (int d = 2; d <= 3 && ok; ++d) {
            const long long emax = d == 2 ? 100 : 30;
            for (long long e = 1; e <= emax && ok; ++e) {
                const FrequencySet fs = enumerate_frequencies(d, e);
                if (fs.multiplicity() == 0) continue;
                const auto m2 = u_moment_exact(fs, 2);
                if (m2 != boost::rational<long long>(1, fs.multiplicity())) {
                    ok = false;
                    detail = "failed at d=" + std::to_string(d) + " E=" + std::to_string(e);
                }
            }
        }
        add_check(rep, "two-point mean square (exact rational)", ok, detail);
    }

    // determinant factorization and Omega route consistency
    {
        const FrequencySet fs = enumerate_frequencies(2, 25);
        bool ok = true;
        double worst = 0;
        for (int i = 0; i < 200 && ok; ++i) {
            Vec z(2);
            z[0] = rng.uniform(2 * i);
            z[1] = rng.uniform(2 * i + 1);
            const CovarianceBlocks bl = covariance_blocks(fs, z);
            const double det_sigma = bl.Sigma.determinant();
            const double det_omega = bl.Omega.determinant();
            const double factor = opts.drop_kernel_prefactor ? 1.0 : (1.0 - bl.u * bl.u);
            const double rel = std::abs(det_sigma - factor * det_omega) /
                               std::max(std::abs(det_sigma), 1e-300);
            worst = std::max(worst, rel);
            if (rel > 1e-8) ok = false;
        }
        add_check(rep, "det Sigma = (1-u^2) det Omega", ok, "worst rel err " + num(worst));
    }

    // Laplacian eigenfunction identity
    {
        const FrequencySet fs = enumerate_frequencies(2, 65);
        const Eigenfunction f = sample_eigenfunction(fs, derive_seed(opts.seed, 7));
        bool ok = true;
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            Vec x(2);
            x[0] = rng.uniform(1000 + 2 * i);
            x[1] = rng.uniform(1000 + 2 * i + 1);
            const JetValue jet = evaluate_jet(f, x);
            const double scale = 4 * kPi * kPi * fs.energy * std::max(1.0, std::abs(jet.value));
            const double rel = std::abs(jet.hessian.trace() + 4 * kPi * kPi * fs.energy * jet.value) / scale;
            worst = std::max(worst, rel);
            if (rel > 1e-9) ok = false;
        }
        add_check(rep, "Laplacian identity (trace H = -4pi^2 E f)", ok,
                  "worst rel err " + num(worst));
    }

    // uniform bound fuzz for the smoothed functional
    {
        const FrequencySet fs = enumerate_frequencies(2, 25);
        bool ok = true;
        double worst_margin = 1e30;
        const double bound = 6.0 * 2 * std::sqrt(25.0);
        for (int i = 0; i < 100 && ok; ++i) {
            const Eigenfunction f = sample_eigenfunction(fs, derive_seed(opts.seed, 100 + i));
            for (double eps : {0.5, 0.1, 0.02}) {
                const double v = nodal_volume_smoothed(f, eps, 80).volume;
                worst_margin = std::min(worst_margin, bound - v);
                if (v > bound + 1e-9) ok = false;
            }
        }
        add_check(rep, "uniform bound Z_eps <= 6 d sqrt(E)", ok,
                  "min margin " + num(worst_margin));
    }

    // 1-D crossing bound fuzz
    {
        bool ok = true;
        double worst = 0;
        for (int i = 0; i < 100 && ok; ++i) {
            TrigPoly1D g;
            const CounterRng crng(derive_seed(opts.seed, 500 + i), 1);
            g.a.resize(10);
            g.b.resize(10);
            g.a0 = crng.normal(0);
            for (int k = 0; k < 10; ++k) {
                g.a[k] = crng.normal(1 + 2 * k);
                g.b[k] = crng.normal(2 + 2 * k);
            }
            for (double eps : {0.3, 0.05}) {
                const double v = crossing_functional_1d(g, eps, 16384);
                worst = std::max(worst, v);
                if (v > 60.0) ok = false;
            }
        }
        add_check(rep, "1-D crossing functional <= 6 M", ok, "max value " + num(worst));
    }

    // non-degeneracy sweep
    {
        const FrequencySet fs = enumerate_frequencies(2, 25);
        bool ok = true;
        double min_eig = 1e30;
        for (int i = 0; i < 1000; ++i) {
            Vec x(2), y(2);
            x[0] = rng.uniform(4000 + 4 * i);
            x[1] = rng.uniform(4000 + 4 * i + 1);
            y[0] = rng.uniform(4000 + 4 * i + 2);
            y[1] = rng.uniform(4000 + 4 * i + 3);
            min_eig = std::min(min_eig, min_eig_sigma(fs, x, y));
        }
        Vec x(2);
        x[0] = 0.3;
        x[1] = 0.7;
        const double deg = min_eig_sigma(fs, x, x);
        ok = min_eig > 0 && std::abs(deg) <= 1e-10;
        add_check(rep, "non-degeneracy sweep (Sigma min eigenvalue)", ok,
                  "min " + num(min_eig) + ", degenerate case " + num(deg));
    }

    // deterministic nodal volumes
    {
        const Eigenfunction single = make_separable_eigenfunction(2, 3, SeparableKind::single_sine);
        const Eigenfunction prod = make_separable_eigenfunction(2, 2, SeparableKind::product_of_sines);
        const double v1 = nodal_volume_marching(single, 512).volume;
        const double v2 = nodal_volume_marching(prod, 512).volume;
        const double n1 = v1 / 3.0, n2 = v2 / std::sqrt(8.0);
        const bool ok = std::abs(n1 - 2.0) <= 0.01 && std::abs(n2 - 2.0 * std::sqrt(2.0)) <= 0.0141;
        add_check(rep, "deterministic nodal volumes", ok,
                  "Z/sqrt(E) = " + num(n1) + " and " + num(n2));
    }

    // kernel identity point, and the dual-route prefactor check
    {
        const FrequencySet fs = enumerate_frequencies(2, 25);
        const CovarianceBlocks ident =
            synthetic_blocks(2, 25, 0.0, Vec::Zero(2), Mat::Zero(2, 2));
        const KernelEstimate k0 = kernel_K(ident, 200000, derive_seed(opts.seed, 9000));
        const double i2 = dimensional_constant(2);
        const double target = i2 * i2 * 25;
        bool ok = std::abs(k0.value - target) <= 4 * k0.std_error;
        std::string detail = "identity point " + num(k0.value) + " vs " + num(target);

        Vec z(2);
        z[0] = 0.21;
        z[1] = 0.37;
        const CovarianceBlocks bl = covariance_blocks(fs, z);
        const KernelEstimate ka = kernel_K(bl, 200000, derive_seed(opts.seed, 9001));
        double mean = 0, m2 = 0;
        Eigen::SelfAdjointEigenSolver<Mat> es(bl.Omega);
        const Mat root = es.eigenvectors() *
                         es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                         es.eigenvectors().transpose();
        detail::kernel_mc_moments(root, 200000, derive_seed(opts.seed, 9002), true, mean, m2);
        const double pref = opts.drop_kernel_prefactor
                                ? 1.0 / (2 * kPi)
                                : 1.0 / (2 * kPi * std::sqrt(1 - bl.u * bl.u));
        const double kb = pref * mean;
        const double tol = 5 * (ka.std_error + pref * std::sqrt(std::max(0.0, m2 - mean * mean) / 200000));
        if (std::abs(ka.value - kb) > tol) ok = false;
        add_check(rep, "kernel normalization (identity point + prefactor route)", ok, detail);
    }

    std::ostringstream os;
    rep.all_passed = true;
    for (const auto& c : rep.checks) {
        rep.all_passed = rep.all_passed && c.passed;
        os << (c.passed ? "PASS" : "FAIL") << " - " << c.name << " - " << c.detail << '\n';
    }
    os << (rep.all_passed ? "OK" : "FAILED") << " (" << rep.checks.size() << " checks)\n";
    rep.text = os.str();
    return rep;
}

}  // namespace arw
