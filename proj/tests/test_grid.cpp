#include <doctest.h>

#include <cmath>

#include "arw/grid.hpp"
#include "arw/nodal.hpp"
#include "arw/rng.hpp"

using namespace arw;

namespace {

double max_diff(const Grid& a, const Grid& b) {
    REQUIRE(a.values.size() == b.values.size());
    double m = 0;
    for (size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("all three evaluation paths agree to 1e-9") {
    for (auto [d, e, m] : std::vector<std::tuple<int, long long, int>>{
             {2, 5, 16}, {2, 25, 64}, {3, 6, 12}, {1, 4, 16}}) {
        const FrequencySet fs = enumerate_frequencies(d, e);
        const Eigenfunction f = sample_eigenfunction(fs, derive_seed(1, d, e));
        const Grid ref = detail::grid_direct_reference(f, m);
        const Grid fast = detail::grid_direct(f, m, true);
        const Grid spec = detail::grid_spectral(f, m);
        CHECK(max_diff(ref, fast) < 1e-9);
        CHECK(max_diff(ref, spec) < 1e-9);
    }
}

TEST_CASE("serial and parallel direct evaluation are bit-identical") {
    const FrequencySet fs = enumerate_frequencies(2, 65);
    const Eigenfunction f = sample_eigenfunction(fs, 99);
    const Grid a = detail::grid_direct(f, 48, false);
    const Grid b = detail::grid_direct(f, 48, true);
    CHECK(a.values == b.values);
}

TEST_CASE("sin 2 pi x1 gives a row-constant grid") {
    const Eigenfunction f = make_separable_eigenfunction(2, 1, SeparableKind::single_sine);
    const Grid g = evaluate_grid(f, 8, GridBackend::spectral);
    for (int k1 = 0; k1 < 8; ++k1)
        for (int k2 = 0; k2 < 8; ++k2)
            CHECK(std::abs(g.values[k1 * 8 + k2] - std::sin(2 * kPi * k1 / 8.0)) < 1e-12);
}

TEST_CASE("spectral backend rejects aliasing grids") {
    const FrequencySet fs = enumerate_frequencies(2, 25);
    const Eigenfunction f = sample_eigenfunction(fs, 1);
    CHECK_THROWS_AS(evaluate_grid(f, 10, GridBackend::spectral), std::invalid_argument);
    CHECK_NOTHROW(evaluate_grid(f, 11, GridBackend::spectral));
}

TEST_CASE("zero-mean grids for random draws") {
    const FrequencySet fs = enumerate_frequencies(2, 25);
    for (int s = 0; s < 10; ++s) {
        const Grid g = evaluate_grid(sample_eigenfunction(fs, derive_seed(3, 0, s)), 64,
                                     GridBackend::spectral);
        double mean = 0;
        for (double v : g.values) mean += v;
        mean /= static_cast<double>(g.values.size());
        // no frequency aliases to zero, so the grid mean vanishes identically
        CHECK(std::abs(mean) < 0.05);
        CHECK(std::abs(mean) < 1e-10);
    }
}

TEST_CASE("offset grid equals direct evaluation at shifted points") {
    const FrequencySet fs = enumerate_frequencies(2, 5);
    const Eigenfunction f = sample_eigenfunction(fs, 77);
    const int m = 16;
    const Grid g = detail::offset_grid(f, m);
    for (int k1 = 0; k1 < m; ++k1)
        for (int k2 = 0; k2 < m; ++k2) {
            Vec x(2);
            x[0] = (k1 + 0.5) / m;
            x[1] = (k2 + 0.5) / m;
            CHECK(std::abs(g.values[k1 * m + k2] - evaluate_value(f, x)) < 1e-10);
        }
}
