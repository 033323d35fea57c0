#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "arw/io.hpp"

using namespace arw;

namespace {
std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("eigenfunction JSON round trip is exact") {
    const FrequencySet fs = enumerate_frequencies(2, 65);
    const Eigenfunction f = sample_eigenfunction(fs, 0xDEADBEEFull);
    const json j = eigenfunction_json(f);
    const Eigenfunction g = eigenfunction_from_json(json::parse(j.dump()));
    CHECK(g.freqset.half_set == f.freqset.half_set);
    CHECK(g.b == f.b);
    CHECK(g.c == f.c);
    REQUIRE(g.seed.has_value());
    CHECK(*g.seed == 0xDEADBEEFull);
}

TEST_CASE("eigenfunction JSON rejects a tampered half_set") {
    const FrequencySet fs = enumerate_frequencies(2, 5);
    json j = eigenfunction_json(sample_eigenfunction(fs, 3));
    std::swap(j["half_set"][0], j["half_set"][1]);
    CHECK_THROWS_AS(eigenfunction_from_json(j), std::invalid_argument);
    json j2 = eigenfunction_json(sample_eigenfunction(fs, 3));
    j2["b"].erase(0);
    CHECK_THROWS_AS(eigenfunction_from_json(j2), std::invalid_argument);
}

TEST_CASE("lattice JSON schema") {
    const json j = frequency_set_json(enumerate_frequencies(2, 25), true);
    CHECK(j["dim"] == 2);
    CHECK(j["energy"] == 25);
    CHECK(j["multiplicity"] == 12);
    CHECK(j["frequencies"].size() == 12);
    REQUIRE(j["orbits"].size() == 2);
    CHECK(j["orbits"][0]["size"] == 4);
    CHECK(j["orbits"][1]["size"] == 8);
    CHECK(j["orbits"][1]["representative"] == json::array({3, 4}));
}

TEST_CASE("grid binary round trip") {
    const FrequencySet fs = enumerate_frequencies(2, 5);
    const Grid g = evaluate_grid(sample_eigenfunction(fs, 17), 16, GridBackend::spectral);
    const std::string path = temp_path("arw_grid_test.bin");
    write_grid_binary(path, g);
    const Grid h = read_grid_binary(path);
    CHECK(h.dim == g.dim);
    CHECK(h.size == g.size);
    CHECK(h.values == g.values);
    std::remove(path.c_str());
}

TEST_CASE("estimate serialization carries the config echo") {
    NodalEstimate est{5.25, NodalMethod::smoothed, 64, 0.05, 0.0};
    const json j = nodal_estimate_json(est);
    CHECK(j["volume"] == 5.25);
    CHECK(j["method"] == "smoothed");
    CHECK(j["epsilon"] == 0.05);

    KernelEstimate k{123.4, 0.1, 1000, 42};
    const json jk = kernel_estimate_json(k);
    CHECK(jk["value"] == 123.4);
    CHECK(jk["mc_samples"] == 1000);

    SecondMomentResult res;
    res.value = 1.5;
    res.cells_total = 100;
    res.cells_skipped = 2;
    res.skipped_mass_bound = 0.25;
    const json jm = second_moment_json(res);
    CHECK(jm["cells_skipped"] == 2);
    CHECK(jm["skipped_mass_bound"] == 0.25);
}

TEST_CASE("experiment record JSON and SVG emission") {
    ExperimentConfig cfg;
    cfg.dim = 2;
    cfg.energies = {5};
    cfg.samples_per_energy = 12;
    cfg.master_seed = 777;
    const ExperimentRecord rec = run_expectation(cfg);
    const json j = experiment_record_json(rec, "samples.csv");
    CHECK(j["config"]["master_seed"] == 777);
    CHECK(j["config"]["grid_M"] == "auto");
    CHECK(j["per_energy"].size() == 1);
    CHECK(j["per_energy"][0]["multiplicity"] == 8);
    CHECK(j["samples_csv"] == "samples.csv");

    const std::string svg = histogram_svg(rec);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("E=5") != std::string::npos);
}
