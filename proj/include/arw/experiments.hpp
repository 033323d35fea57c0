#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "arw/nodal.hpp"

namespace arw {

struct ExperimentConfig {
    int dim = 2;
    std::vector<long long> energies;
    long long samples_per_energy = 100;
    int grid_M = 0;  // 0 = auto policy (default_grid)
    std::uint64_t master_seed = 1;
    std::string output_path;  // results JSON; per-sample CSV sits next to it
};

struct SampleRow {
    long long energy = 0;
    long long sample_index = 0;
    std::uint64_t seed = 0;
    double z = 0;       // nodal volume
    double z_norm = 0;  // Z / sqrt(E)
    int grid_M = 0;
    double refinement_error = 0;
};

struct EnergySummary {
    long long energy = 0;
    long long multiplicity = 0;
    long long samples = 0;
    int grid_M = 0;
    double mean_norm = 0;      // mean of Z/sqrt(E)
    double var_norm = 0;       // sample variance of Z/sqrt(E)
    double std_error = 0;      // of the mean
    double var_sqrt_n = 0;     // Var * sqrt(N)
    double var_n = 0;          // Var * N (exploratory diagnostic)
    double theory_mean = 0;    // I_d
};

struct ExperimentRecord {
    ExperimentConfig config;
    std::vector<EnergySummary> per_energy;
    std::vector<SampleRow> samples;  // ordered by (energy position, sample index)
    double wall_seconds = 0;
};

// Per-sample seeds are derive_seed(master, energy, index), so scheduling and
// worker count cannot change any output.
ExperimentRecord run_expectation(const ExperimentConfig& cfg);

// Same driver; requires the energies to have strictly increasing multiplicity
// and reports the normalized variance columns.
ExperimentRecord run_variance(const ExperimentConfig& cfg);

// CSV with header energy,sample_index,seed,Z,Z_normalized,grid_M,refinement_error;
// doubles are written round-trip exact.
std::string sample_csv(const ExperimentRecord& rec);

// Summaries recomputed from rows exactly the way run_* does it.
std::pair<double, double> mean_and_variance(const std::vector<double>& xs);

struct VerifyOptions {
    std::uint64_t seed = 0xA11CE5ED;
    // Test hook: drops the 1/sqrt(1-u^2) prefactor (and the matching det
    // factor) inside the verify checks; a healthy build must then fail them.
    bool drop_kernel_prefactor = false;
};

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_passed = false;
    std::string text;  // byte-stable report
};

// Identity suite: exact lattice moments, exact u moments, det factorization,
// Laplacian check, bound fuzzes, non-degeneracy sweep, deterministic volumes.
VerifyReport run_verify(const VerifyOptions& opts = {});

}  // namespace arw
