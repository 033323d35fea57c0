// Command-line front end: lattice / sample / nodal / kernel / moments /
// singular / experiment / verify / calibrate.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "arw/calibration.hpp"
#include "arw/experiments.hpp"
#include "arw/io.hpp"
#include "arw/rng.hpp"

namespace {

arw::Vec parse_point(const std::string& s) {
    std::vector<double> xs;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) xs.push_back(std::stod(item));
    arw::Vec v(static_cast<Eigen::Index>(xs.size()));
    for (size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
    return v;
}

std::vector<long long> parse_energies(const std::string& s) {
    std::vector<long long> es;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) es.push_back(std::stoll(item));
    return es;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) std::cout << content;
    else arw::write_text_file(path, content);
}

// Flat key = value config subset (strings, integers, [int, int, ...]).
void apply_toml_config(const std::string& path, arw::ExperimentConfig& cfg) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos && line.find('"') == std::string::npos)
            line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string t) {
            const auto b = t.find_first_not_of(" \t\r");
            const auto e = t.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
            val = val.substr(1, val.size() - 2);
        if (key == "dim") cfg.dim = std::stoi(val);
        else if (key == "samples_per_energy") cfg.samples_per_energy = std::stoll(val);
        else if (key == "master_seed") cfg.master_seed = std::stoull(val);
        else if (key == "output_path") cfg.output_path = val;
        else if (key == "grid_M") cfg.grid_M = val == "auto" ? 0 : std::stoi(val);
        else if (key == "energies") {
            std::string inner = val;
            inner.erase(std::remove(inner.begin(), inner.end(), '['), inner.end());
            inner.erase(std::remove(inner.begin(), inner.end(), ']'), inner.end());
            inner.erase(std::remove(inner.begin(), inner.end(), ' '), inner.end());
            cfg.energies = parse_energies(inner);
        }
    }
}

void write_experiment_outputs(const arw::ExperimentRecord& rec, const std::string& out,
                              const std::string& svg) {
    const std::string json_path = out.empty() ? "results.json" : out;
    const std::string csv_path = json_path + ".samples.csv";
    arw::write_text_file(csv_path, arw::sample_csv(rec));
    arw::write_text_file(json_path, arw::experiment_record_json(rec, csv_path).dump(2) + "\n");
    if (!svg.empty()) arw::write_text_file(svg, arw::histogram_svg(rec));
    for (const auto& s : rec.per_energy)
        std::printf("E=%-6lld N=%-3lld M=%-4d mean(Z/sqrtE)=%.5f +/- %.5f  var=%.6g  "
                    "var*sqrtN=%.6g  var*N=%.6g\n",
                    s.energy, s.multiplicity, s.grid_M, s.mean_norm, s.std_error, s.var_norm,
                    s.var_sqrt_n, s.var_n);
    std::printf("theory mean I_d = %.7f; wall %.1fs; wrote %s\n",
                rec.per_energy.empty() ? 0.0 : rec.per_energy.front().theory_mean,
                rec.wall_seconds, json_path.c_str());
}

int run_calibrate(long long samples, std::uint64_t seed) {
    using namespace arw;
    std::printf("# calibration pilot: %lld samples per energy, master seed %llu\n", samples,
                static_cast<unsigned long long>(seed));
    ExperimentConfig cfg;
    cfg.dim = 2;
    cfg.energies = {5, 25, 65, 325, 1105};
    cfg.samples_per_energy = samples;
    cfg.master_seed = seed;
    const ExperimentRecord rec = run_variance(cfg);
    std::printf("\nvariance profile (paste into calibration.hpp as kVarianceProfile):\n");
    double col_max = 0;
    for (const auto& s : rec.per_energy) {
        std::printf("    {%lld, %.3g},\n", s.energy, s.var_norm);
        col_max = std::max(col_max, s.var_sqrt_n);
    }
    std::printf("column max Var*sqrtN = %.4g (ceiling should be ~2x this)\n\n", col_max);

    double sig_lo = 1e30, sig_hi = 0, sig2_lo = 1e30, sig2_hi = 0;
    for (long long e : cfg.energies) {
        const FrequencySet fs = enumerate_frequencies(2, e);
        const CounterRng rng(seed, 77);
        double s1 = 0, s2 = 0;
        long long n = 0;
        for (int i = 0; i < 4096; ++i) {
            Vec z(2);
            z[0] = rng.uniform(2 * i);
            z[1] = rng.uniform(2 * i + 1);
            if (classify_singular(fs, z).kind != SingularKind::nonsingular) continue;
            const CovarianceBlocks bl = covariance_blocks(fs, z);
            s1 += bl.sigma_norm;
            s2 += bl.sigma_norm * bl.sigma_norm;
            ++n;
        }
        const double m1 = s1 / n * std::sqrt(static_cast<double>(fs.multiplicity()));
        const double m2 = s2 / n * static_cast<double>(fs.multiplicity());
        sig_lo = std::min(sig_lo, m1);
        sig_hi = std::max(sig_hi, m1);
        sig2_lo = std::min(sig2_lo, m2);
        sig2_hi = std::max(sig2_hi, m2);
        std::printf("E=%-6lld avg(sigma)*sqrtN=%.4f avg(sigma^2)*N=%.4f\n", e, m1, m2);
    }
    std::printf("sigma band ratio %.3f, sigma^2 band ratio %.3f\n\n", sig_hi / sig_lo,
                sig2_hi / sig2_lo);

    for (long long e : {25LL, 325LL}) {
        const FrequencySet fs = enumerate_frequencies(2, e);
        const int m = static_cast<int>(isqrt_floor(e));
        const double meas = singular_set_measure(fs, m);
        const auto u4 = u_moment_exact(fs, 4);
        const double u4d = static_cast<double>(u4.numerator()) / static_cast<double>(u4.denominator());
        std::printf("E=%-6lld meas(B)=%.5f  int u^4=%.5f  ratio=%.2f\n", e, meas, u4d, meas / u4d);
    }

    const FrequencySet fs25 = enumerate_frequencies(2, 25);
    const CounterRng rng(seed, 99);
    double best = 0;
    for (int i = 0; i < 200; ++i) {
        Vec z(2);
        z[0] = rng.uniform(2 * i);
        z[1] = rng.uniform(2 * i + 1);
        try {
            const CovarianceBlocks bl = covariance_blocks(fs25, z);
            const KernelEstimate k = kernel_K(bl, 20000, derive_seed(seed, i));
            best = std::max(best, k.value * std::sqrt(1 - bl.u * bl.u) / 25.0);
        } catch (const std::domain_error&) {
        }
    }
    std::printf("max K*sqrt(1-u^2)/E over 200 z: %.3f (kKernelBoundC should stay ~2x above)\n",
                best);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("ARW_THREADS")) {
#if defined(_OPENMP)
        const int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
#else
        (void)env;
#endif
    }

    CLI::App app{"arithmetic random waves: sampling, nodal volume, Kac-Rice moments"};
    app.require_subcommand(1);

    // lattice
    int dim = 2;
    long long energy = 25;
    bool with_orbits = false;
    std::string format = "json", out, in_path, method = "marching", mesh_path, zspec = "0.1,0.2";
    std::uint64_t seed = 1;
    int grid_m = 0;
    double eps = 0.1;
    long long mc = 1000000, mc_per_point = 1000;
    std::string grid_out, grid_format = "bin", svg_path, config_path, energies_spec = "5,25,65";
    std::string backend = "spectral";
    long long samples = 100;
    int cubes = 5;

    auto* lat = app.add_subcommand("lattice", "enumerate the frequency set");
    lat->add_option("--dim", dim)->required();
    lat->add_option("--energy", energy)->required();
    lat->add_flag("--orbits", with_orbits);
    lat->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    lat->add_option("--out", out);

    auto* smp = app.add_subcommand("sample", "draw one random eigenfunction");
    smp->add_option("--dim", dim)->required();
    smp->add_option("--energy", energy)->required();
    smp->add_option("--seed", seed)->required();
    smp->add_option("--out", out)->required();
    smp->add_option("--grid", grid_m);
    smp->add_option("--grid-out", grid_out);
    smp->add_option("--grid-format", grid_format)->check(CLI::IsMember({"bin", "csv"}));
    smp->add_option("--grid-backend", backend)->check(CLI::IsMember({"direct", "spectral"}));

    auto* nod = app.add_subcommand("nodal", "measure the nodal volume of a stored eigenfunction");
    nod->add_option("--in", in_path)->required();
    nod->add_option("--method", method)->check(CLI::IsMember({"marching", "smoothed"}));
    nod->add_option("--grid", grid_m);
    nod->add_option("--eps", eps);
    nod->add_option("--out", out);
    nod->add_option("--mesh", mesh_path);

    auto* ker = app.add_subcommand("kernel", "two-point kernel K at one separation");
    ker->add_option("--dim", dim)->required();
    ker->add_option("--energy", energy)->required();
    ker->add_option("--z", zspec)->required();
    ker->add_option("--mc", mc);
    ker->add_option("--seed", seed);
    ker->add_option("--out", out);

    auto* mom = app.add_subcommand("moments", "integral of K over the torus");
    mom->add_option("--dim", dim)->required();
    mom->add_option("--energy", energy)->required();
    mom->add_option("--grid", grid_m)->required();
    mom->add_option("--mc-per-point", mc_per_point);
    mom->add_option("--seed", seed);
    mom->add_option("--out", out);

    auto* sng = app.add_subcommand("singular", "sampled measure of the singular set");
    sng->add_option("--dim", dim)->required();
    sng->add_option("--energy", energy)->required();
    sng->add_option("--cubes", cubes)->required();
    sng->add_option("--out", out);

    auto* exp = app.add_subcommand("experiment", "Monte Carlo studies");
    exp->require_subcommand(1);
    auto add_exp_opts = [&](CLI::App* sub) {
        sub->add_option("--dim", dim);
        sub->add_option("--energies", energies_spec);
        sub->add_option("--samples", samples);
        sub->add_option("--seed", seed);
        sub->add_option("--grid", grid_m);
        sub->add_option("--out", out);
        sub->add_option("--svg", svg_path);
        sub->add_option("--config", config_path);
    };
    auto* exp_e = exp->add_subcommand("expectation", "mean of Z/sqrt(E) vs theory");
    add_exp_opts(exp_e);
    auto* exp_v = exp->add_subcommand("variance", "variance decay across energies");
    add_exp_opts(exp_v);

    auto* ver = app.add_subcommand("verify", "run the identity suite; exit 0/1");
    ver->add_option("--out", out);

    auto* cal = app.add_subcommand("calibrate", "pilot run backing the pinned constants");
    cal->add_option("--samples", samples);
    cal->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*lat) {
            const arw::FrequencySet fs = arw::enumerate_frequencies(dim, energy);
            if (format == "json") {
                emit(out, arw::frequency_set_json(fs, with_orbits).dump(2) + "\n");
            } else {
                std::ostringstream os;
                for (const auto& l : fs.frequencies) {
                    for (size_t j = 0; j < l.size(); ++j)
                        os << l[j] << (j + 1 == l.size() ? '\n' : ',');
                }
                emit(out, os.str());
            }
        } else if (*smp) {
            const arw::FrequencySet fs = arw::enumerate_frequencies(dim, energy);
            const arw::Eigenfunction f = arw::sample_eigenfunction(fs, seed);
            arw::write_text_file(out, arw::eigenfunction_json(f).dump(2) + "\n");
            if (grid_m > 0 && !grid_out.empty()) {
                const arw::Grid g = arw::evaluate_grid(
                    f, grid_m,
                    backend == "spectral" ? arw::GridBackend::spectral : arw::GridBackend::direct);
                if (grid_format == "bin") arw::write_grid_binary(grid_out, g);
                else arw::write_grid_csv(grid_out, g);
            }
        } else if (*nod) {
            const arw::Eigenfunction f =
                arw::eigenfunction_from_json(arw::json::parse(arw::read_text_file(in_path)));
            const int m = grid_m > 0 ? grid_m : arw::default_grid(f.freqset.energy);
            arw::NodalEstimate est;
            if (method == "marching") {
                std::vector<double> mesh;
                est = arw::nodal_volume_marching(f, m, mesh_path.empty() ? nullptr : &mesh);
                if (!mesh_path.empty()) {
                    std::ostringstream os;
                    const int stride = f.freqset.dim == 2 ? 4 : 9;
                    const char* tag = f.freqset.dim == 2 ? "seg" : "tri";
                    char buf[32];
                    for (size_t i = 0; i < mesh.size(); i += stride) {
                        os << tag;
                        for (int j = 0; j < stride; ++j) {
                            std::snprintf(buf, sizeof(buf), " %.9g", mesh[i + j]);
                            os << buf;
                        }
                        os << '\n';
                    }
                    arw::write_text_file(mesh_path, os.str());
                }
            } else {
                est = arw::nodal_volume_smoothed(f, eps, m);
            }
            emit(out, arw::nodal_estimate_json(est).dump(2) + "\n");
        } else if (*ker) {
            const arw::FrequencySet fs = arw::enumerate_frequencies(dim, energy);
            const arw::CovarianceBlocks bl = arw::covariance_blocks(fs, parse_point(zspec));
            const arw::KernelEstimate est = arw::kernel_K(bl, mc, seed);
            arw::json j = arw::kernel_estimate_json(est);
            j["config"] = {{"dim", dim}, {"energy", energy}, {"z", zspec}};
            emit(out, j.dump(2) + "\n");
        } else if (*mom) {
            const arw::FrequencySet fs = arw::enumerate_frequencies(dim, energy);
            const arw::SecondMomentResult res = arw::second_moment(fs, grid_m, mc_per_point, seed);
            arw::json j = arw::second_moment_json(res);
            j["config"] = {{"dim", dim}, {"energy", energy}};
            j["theory_first_moment_sq"] =
                arw::expected_volume(dim, energy) * arw::expected_volume(dim, energy);
            emit(out, j.dump(2) + "\n");
        } else if (*sng) {
            const arw::FrequencySet fs = arw::enumerate_frequencies(dim, energy);
            const double meas = arw::singular_set_measure(fs, cubes);
            const auto u4 = arw::u_moment_exact(fs, 4);
            arw::json j = {{"measure_estimate", meas},
                           {"cubes", cubes},
                           {"u4_exact_num", u4.numerator()},
                           {"u4_exact_den", u4.denominator()},
                           {"config", {{"dim", dim}, {"energy", energy}}}};
            emit(out, j.dump(2) + "\n");
        } else if (*exp) {
            arw::ExperimentConfig cfg;
            cfg.dim = dim;
            cfg.energies = parse_energies(energies_spec);
            cfg.samples_per_energy = samples;
            cfg.master_seed = seed;
            cfg.grid_M = grid_m;
            cfg.output_path = out;
            if (!config_path.empty()) apply_toml_config(config_path, cfg);
            const arw::ExperimentRecord rec =
                *exp_e ? arw::run_expectation(cfg) : arw::run_variance(cfg);
            write_experiment_outputs(rec, cfg.output_path, svg_path);
        } else if (*ver) {
            const arw::VerifyReport rep = arw::run_verify();
            if (out.empty()) std::cout << rep.text;
            else arw::write_text_file(out, rep.text);
            return rep.all_passed ? 0 : 1;
        } else if (*cal) {
            return run_calibrate(samples, seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
