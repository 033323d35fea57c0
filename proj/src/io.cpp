#include "arw/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arw {

json frequency_set_json(const FrequencySet& fs, bool with_orbits) {
    json j;
    j["dim"] = fs.dim;
    j["energy"] = fs.energy;
    j["multiplicity"] = fs.multiplicity();
    j["frequencies"] = fs.frequencies;
    if (with_orbits) {
        json orbits = json::array();
        for (const auto& o : orbit_decomposition(fs))
            orbits.push_back({{"representative", o.representative}, {"size", o.members.size()}});
        j["orbits"] = orbits;
    }
    return j;
}

json eigenfunction_json(const Eigenfunction& f) {
    json j;
    j["dim"] = f.freqset.dim;
    j["energy"] = f.freqset.energy;
    if (f.seed) j["seed"] = *f.seed;
    else j["seed"] = nullptr;
    j["half_set"] = f.freqset.half_set;
    j["b"] = std::vector<double>(f.b.data(), f.b.data() + f.b.size());
    j["c"] = std::vector<double>(f.c.data(), f.c.data() + f.c.size());
    return j;
}

Eigenfunction eigenfunction_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    const long long energy = j.at("energy").get<long long>();
    Eigenfunction f;
    f.freqset = enumerate_frequencies(dim, energy);
    const auto half = j.at("half_set").get<std::vector<LatticePoint>>();
    if (half != f.freqset.half_set)
        throw std::invalid_argument("eigenfunction_from_json: half_set does not match the "
                                    "canonical ordering for (dim, energy)");
    const auto b = j.at("b").get<std::vector<double>>();
    const auto c = j.at("c").get<std::vector<double>>();
    if (b.size() != f.freqset.half_set.size() || c.size() != f.freqset.half_set.size())
        throw std::invalid_argument("eigenfunction_from_json: coefficient length mismatch");
    f.b = Eigen::Map<const Vec>(b.data(), static_cast<Eigen::Index>(b.size()));
    f.c = Eigen::Map<const Vec>(c.data(), static_cast<Eigen::Index>(c.size()));
    if (!j.at("seed").is_null()) f.seed = j.at("seed").get<std::uint64_t>();
    return f;
}

json nodal_estimate_json(const NodalEstimate& est) {
    json j;
    j["volume"] = est.volume;
    j["method"] = est.method == NodalMethod::marching ? "marching" : "smoothed";
    j["grid_M"] = est.grid_M;
    if (est.epsilon) j["epsilon"] = *est.epsilon;
    j["refinement_error"] = est.refinement_error;
    return j;
}

json kernel_estimate_json(const KernelEstimate& est) {
    return {{"value", est.value},
            {"std_error", est.std_error},
            {"mc_samples", est.mc_samples},
            {"seed", est.seed}};
}

json second_moment_json(const SecondMomentResult& res) {
    return {{"value", res.value},
            {"std_error", res.std_error},
            {"cells_total", res.cells_total},
            {"cells_skipped", res.cells_skipped},
            {"cells_refined", res.cells_refined},
            {"skipped_mass_bound", res.skipped_mass_bound},
            {"grid", res.grid},
            {"mc_per_cell", res.mc_per_cell},
            {"seed", res.seed}};
}

json experiment_record_json(const ExperimentRecord& rec, const std::string& csv_path) {
    json cfg;
    cfg["dim"] = rec.config.dim;
    cfg["energies"] = rec.config.energies;
    cfg["samples_per_energy"] = rec.config.samples_per_energy;
    cfg["grid_M"] = rec.config.grid_M == 0 ? json("auto") : json(rec.config.grid_M);
    cfg["master_seed"] = rec.config.master_seed;
    cfg["output_path"] = rec.config.output_path;
    json per = json::array();
    for (const auto& s : rec.per_energy)
        per.push_back({{"energy", s.energy},
                       {"multiplicity", s.multiplicity},
                       {"samples", s.samples},
                       {"grid_M", s.grid_M},
                       {"mean_Z_normalized", s.mean_norm},
                       {"var_Z_normalized", s.var_norm},
                       {"std_error", s.std_error},
                       {"var_times_sqrtN", s.var_sqrt_n},
                       {"var_times_N", s.var_n},
                       {"theory_mean", s.theory_mean}});
    return {{"config", cfg},
            {"per_energy", per},
            {"wall_seconds", rec.wall_seconds},
            {"samples_csv", csv_path}};
}

void write_grid_binary(const std::string& path, const Grid& g) {
    json header = {{"dim", g.dim},
                   {"size", g.size},
                   {"count", g.count()},
                   {"dtype", "float64"},
                   {"order", "row-major"}};
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << header.dump() << '\n';
    os.write(reinterpret_cast<const char*>(g.values.data()),
             static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("failed writing " + path);
}

Grid read_grid_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string header_line;
    std::getline(is, header_line);
    const json header = json::parse(header_line);
    Grid g;
    g.dim = header.at("dim").get<int>();
    g.size = header.at("size").get<int>();
    g.values.resize(header.at("count").get<long long>());
    is.read(reinterpret_cast<char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("failed reading " + path);
    return g;
}

void write_grid_csv(const std::string& path, const Grid& g) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    const long long rows = g.count() / g.size;
    char buf[32];
    for (long long r = 0; r < rows; ++r) {
        for (int c = 0; c < g.size; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", g.values[r * g.size + c]);
            os << buf << (c + 1 == g.size ? '\n' : ',');
        }
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string histogram_svg(const ExperimentRecord& rec) {
    constexpr int kBins = 40, kW = 520, kPanelH = 140, kPad = 40;
    std::ostringstream os;
    const int total_h = kPad + static_cast<int>(rec.per_energy.size()) * (kPanelH + kPad);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW + 2 * kPad << "' height='"
       << total_h << "'>\n";
    int panel = 0;
    for (const auto& s : rec.per_energy) {
        std::vector<double> vals;
        for (const auto& r : rec.samples)
            if (r.energy == s.energy) vals.push_back(r.z_norm);
        const double lo = *std::min_element(vals.begin(), vals.end());
        const double hi = *std::max_element(vals.begin(), vals.end());
        const double span = std::max(hi - lo, 1e-12);
        std::vector<int> bins(kBins, 0);
        for (double v : vals) {
            int b = static_cast<int>((v - lo) / span * kBins);
            bins[std::clamp(b, 0, kBins - 1)]++;
        }
        const int peak = *std::max_element(bins.begin(), bins.end());
        const int y0 = kPad + panel * (kPanelH + kPad);
        os << "<text x='" << kPad << "' y='" << y0 - 8 << "' font-size='12'>E=" << s.energy
           << "  N=" << s.multiplicity << "  mean=" << s.mean_norm << "  var=" << s.var_norm
           << "</text>\n";
        const double bw = static_cast<double>(kW) / kBins;
        for (int b = 0; b < kBins; ++b) {
            const double h = peak ? kPanelH * static_cast<double>(bins[b]) / peak : 0;
            os << "<rect x='" << kPad + b * bw << "' y='" << y0 + kPanelH - h << "' width='"
               << bw - 1 << "' height='" << h << "' fill='steelblue'/>\n";
        }
        ++panel;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace arw
