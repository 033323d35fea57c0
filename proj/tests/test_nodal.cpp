#include <doctest.h>

#include <cmath>

#include "arw/nodal.hpp"
#include "arw/rng.hpp"

using namespace arw;

TEST_CASE("deterministic nodal volumes, single sine and product") {
    const Eigenfunction single = make_separable_eigenfunction(2, 3, SeparableKind::single_sine);
    const NodalEstimate e1 = nodal_volume_marching(single, 512);
    CHECK(std::abs(e1.volume - 6.0) <= 0.005 * 6.0);
    CHECK(std::abs(e1.volume / 3.0 - 2.0) <= 0.01);

    const Eigenfunction prod = make_separable_eigenfunction(2, 2, SeparableKind::product_of_sines);
    const NodalEstimate e2 = nodal_volume_marching(prod, 512);
    CHECK(std::abs(e2.volume - 8.0) <= 0.005 * 8.0);
    CHECK(std::abs(e2.volume / std::sqrt(8.0) - 2.0 * std::sqrt(2.0)) <= 0.005 * 2 * std::sqrt(2.0));
}

TEST_CASE("translation leaves the nodal volume unchanged") {
    const FrequencySet fs = enumerate_frequencies(2, 25);
    const Eigenfunction f = sample_eigenfunction(fs, 31337);
    Vec a(2);
    a[0] = 0.2371;
    a[1] = 0.6143;
    const NodalEstimate v0 = nodal_volume_marching(f, default_grid(25));
    const NodalEstimate v1 = nodal_volume_marching(translate(f, a), default_grid(25));
    CHECK(std::abs(v0.volume - v1.volume) <=
          2 * std::max(v0.refinement_error, v1.refinement_error) + 1e-9);
}

TEST_CASE("marching in three dimensions on the separable cases") {
    const Eigenfunction single = make_separable_eigenfunction(3, 1, SeparableKind::single_sine);
    const NodalEstimate e1 = nodal_volume_marching(single, 32);
    CHECK(std::abs(e1.volume - 2.0) <= 0.01 * 2.0);

    const Eigenfunction prod = make_separable_eigenfunction(3, 1, SeparableKind::product_of_sines);
    const NodalEstimate e2 = nodal_volume_marching(prod, 64);
    CHECK(std::abs(e2.volume - 6.0) <= 0.025 * 6.0);
    CHECK(std::abs(e2.volume / std::sqrt(3.0) - 2.0 * std::sqrt(3.0)) <= 0.025 * 2 * std::sqrt(3.0));
}

TEST_CASE("marching argument validation") {
    const Eigenfunction f4 = make_separable_eigenfunction(4, 1, SeparableKind::single_sine);
    CHECK_THROWS_AS(nodal_volume_marching(f4, 64), std::invalid_argument);
    const Eigenfunction f = sample_eigenfunction(enumerate_frequencies(2, 25), 5);
    CHECK_THROWS_AS(nodal_volume_marching(f, 16), std::invalid_argument);  // under-resolved
    CHECK_THROWS_AS(nodal_volume_smoothed(f, 0.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(nodal_volume_smoothed(f, 0.1, 16), std::invalid_argument);
}

TEST_CASE("smoothed functional on sin 2 pi x1") {
    const Eigenfunction f = make_separable_eigenfunction(2, 1, SeparableKind::single_sine);
    const int m = 256;
    const double eps = 0.05;
    const NodalEstimate est = nodal_volume_smoothed(f, eps, m);
    // Independent 1-D quadrature of the same rule. The sharp indicator
    // quantizes to whole columns, which caps the accuracy of this aligned
    // case near 2% regardless of M; the continuum value is exactly 2.
    double oracle = 0;
    for (int k = 0; k < m; ++k) {
        const double x = (k + 0.5) / m;
        if (std::abs(std::sin(2 * kPi * x)) <= eps)
            oracle += std::abs(2 * kPi * std::cos(2 * kPi * x));
    }
    oracle /= 2 * eps * m;
    CHECK(std::abs(est.volume - oracle) <= 1e-9);
    CHECK(std::abs(est.volume - 2.0) <= 0.02 * 2.0);
}

TEST_CASE("epsilon sequence approaches the marching value") {
    const FrequencySet fs = enumerate_frequencies(2, 25);
    for (int i = 0; i < 3; ++i) {
        const Eigenfunction f = sample_eigenfunction(fs, derive_seed(97, 0, i));
        const NodalEstimate march = nodal_volume_marching(f, default_grid(25));
        double dist[3];
        int t = 0;
        for (double eps : {0.2, 0.1, 0.05})
            dist[t++] = std::abs(nodal_volume_smoothed(f, eps, 1024).volume - march.volume);
        CHECK(dist[2] <= std::max(0.015 * march.volume, 3 * march.refinement_error));
        CHECK(dist[2] <= dist[0] + 0.005 * march.volume);
    }
}

TEST_CASE("uniform bound holds on a fuzz corpus") {
    const FrequencySet fs = enumerate_frequencies(2, 25);
    const double bound = 6 * 2 * std::sqrt(25.0);
    for (int i = 0; i < 50; ++i) {
        const Eigenfunction f = sample_eigenfunction(fs, derive_seed(23, 0, i));
        for (double eps : {0.5, 0.1, 0.02, 0.004}) {
            const NodalEstimate est = nodal_volume_smoothed(f, eps, 80);
            CHECK(est.volume <= bound + 1e-9);
            CHECK(est.volume >= 0.0);
        }
    }
}

TEST_CASE("marching and smoothed estimators agree") {
    for (auto [e, seed0] : std::vector<std::pair<long long, int>>{{5, 100}, {25, 200}}) {
        const FrequencySet fs = enumerate_frequencies(2, e);
        for (int i = 0; i < 4; ++i) {
            const Eigenfunction f = sample_eigenfunction(fs, derive_seed(29, e, seed0 + i));
            const NodalEstimate march = nodal_volume_marching(f, default_grid(e));
            const NodalEstimate smooth = nodal_volume_smoothed(f, 0.02, 1024);
            CHECK(std::abs(march.volume - smooth.volume) <=
                  std::max(0.015 * march.volume, 3 * march.refinement_error));
        }
    }
}

TEST_CASE("marching is exactly invariant under coefficient scaling") {
    const FrequencySet fs = enumerate_frequencies(2, 25);
    const Eigenfunction f = sample_eigenfunction(fs, 4242);
    const NodalEstimate a = nodal_volume_marching(f, 80);
    const NodalEstimate b = nodal_volume_marching(scale(f, 5.0), 80);
    CHECK(a.volume == b.volume);
    const NodalEstimate s1 = nodal_volume_smoothed(f, 0.1, 96);
    const NodalEstimate s2 = nodal_volume_smoothed(scale(f, 5.0), 0.5, 96);
    CHECK(s1.volume == doctest::Approx(s2.volume).epsilon(1e-12));
}

TEST_CASE("volume is invariant under coordinate permutation and reflection") {
    const FrequencySet fs = enumerate_frequencies(2, 65);
    const Eigenfunction f = sample_eigenfunction(fs, 777);
    const NodalEstimate v = nodal_volume_marching(f, default_grid(65));
    const NodalEstimate vp = nodal_volume_marching(permute_coordinates(f, {1, 0}), default_grid(65));
    const NodalEstimate vr = nodal_volume_marching(reflect(f), default_grid(65));
    const double tol = 2 * std::max({v.refinement_error, vp.refinement_error,
                                     vr.refinement_error}) + 1e-9;
    CHECK(std::abs(v.volume - vp.volume) <= tol);
    CHECK(std::abs(v.volume - vr.volume) <= tol);
}

TEST_CASE("refinement error shrinks at the finer level") {
    const FrequencySet fs = enumerate_frequencies(2, 5);
    int improved = 0;
    const int n = 20;
    for (int i = 0; i < n; ++i) {
        const Eigenfunction f = sample_eigenfunction(fs, derive_seed(53, 0, i));
        const double e_coarse = nodal_volume_marching(f, 64).refinement_error;
        const double e_fine = nodal_volume_marching(f, 128).refinement_error;
        if (e_fine < e_coarse) ++improved;
    }
    CHECK(improved >= 17);  // 95% target with a small-corpus allowance
}

TEST_CASE("serial and parallel marching agree") {
    const FrequencySet fs = enumerate_frequencies(2, 25);
    const Eigenfunction f = sample_eigenfunction(fs, 11);
    const Grid g = detail::offset_grid(f, 128);
    const double a = detail::marching_measure(g, f, false, nullptr);
    const double b = detail::marching_measure(g, f, true, nullptr);
    CHECK(a == b);
    const double s1 = detail::smoothed_measure(f, 0.1, 96, false);
    const double s2 = detail::smoothed_measure(f, 0.1, 96, true);
    CHECK(s1 == s2);
}

TEST_CASE("mesh dump matches the reported length") {
    const FrequencySet fs = enumerate_frequencies(2, 5);
    const Eigenfunction f = sample_eigenfunction(fs, 8);
    std::vector<double> mesh;
    const NodalEstimate est = nodal_volume_marching(f, 64, &mesh);
    REQUIRE(mesh.size() % 4 == 0);
    double len = 0;
    for (size_t i = 0; i < mesh.size(); i += 4)
        len += std::hypot(mesh[i + 2] - mesh[i], mesh[i + 3] - mesh[i + 1]);
    CHECK(len == doctest::Approx(est.volume).epsilon(1e-9));
}

TEST_CASE("triangle dump matches the reported area in 3-D") {
    const FrequencySet fs = enumerate_frequencies(3, 3);
    const Eigenfunction f = sample_eigenfunction(fs, 21);
    std::vector<double> mesh;
    const NodalEstimate est = nodal_volume_marching(f, 16, &mesh);
    REQUIRE(mesh.size() % 9 == 0);
    double area = 0;
    for (size_t i = 0; i < mesh.size(); i += 9) {
        const double ux = mesh[i + 3] - mesh[i], uy = mesh[i + 4] - mesh[i + 1],
                     uz = mesh[i + 5] - mesh[i + 2];
        const double vx = mesh[i + 6] - mesh[i], vy = mesh[i + 7] - mesh[i + 1],
                     vz = mesh[i + 8] - mesh[i + 2];
        const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
        area += 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
    }
    CHECK(area == doctest::Approx(est.volume).epsilon(1e-9));
}

TEST_CASE("crossing functional examples and bound") {
    TrigPoly1D sine;
    sine.a = {0.0};
    sine.b = {1.0};
    CHECK(std::abs(crossing_functional_1d(sine, 0.1) - 2.0) <= 0.005 * 2.0);

    TrigPoly1D constant;
    constant.a0 = 2.0;
    CHECK(crossing_functional_1d(constant, 0.5) == 0.0);
    CHECK_THROWS_AS(crossing_functional_1d(sine, 0.0), std::invalid_argument);

    for (int i = 0; i < 100; ++i) {
        TrigPoly1D g;
        const CounterRng rng(derive_seed(61, 0, i), 0);
        g.a.resize(10);
        g.b.resize(10);
        g.a0 = rng.normal(0);
        for (int k = 0; k < 10; ++k) {
            g.a[k] = rng.normal(1 + 2 * k);
            g.b[k] = rng.normal(2 + 2 * k);
        }
        for (double eps : {0.3, 0.05}) CHECK(crossing_functional_1d(g, eps, 16384) <= 60.0);
    }
}

TEST_CASE("separable construction details") {
    const Eigenfunction s = make_separable_eigenfunction(2, 1, SeparableKind::single_sine);
    CHECK(s.freqset.energy == 1);
    REQUIRE(s.freqset.half_set == std::vector<LatticePoint>{{0, 1}, {1, 0}});
    CHECK(s.b[0] == 0.0);
    CHECK(s.b[1] == 0.0);
    CHECK(s.c[0] == 0.0);
    CHECK(s.c[1] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));

    const Eigenfunction p = make_separable_eigenfunction(2, 2, SeparableKind::product_of_sines);
    CHECK(p.freqset.energy == 8);
    int nonzero = 0;
    for (Eigen::Index i = 0; i < p.b.size(); ++i)
        if (p.b[i] != 0 || p.c[i] != 0) {
            ++nonzero;
            const auto& lam = p.freqset.half_set[static_cast<size_t>(i)];
            CHECK(std::abs(lam[0]) == 2);
            CHECK(std::abs(lam[1]) == 2);
        }
    CHECK(nonzero == 2);
    const CounterRng rng(67, 0);
    for (int i = 0; i < 100; ++i) {
        Vec x(2);
        x[0] = rng.uniform(2 * i);
        x[1] = rng.uniform(2 * i + 1);
        const double want = std::sin(4 * kPi * x[0]) * std::sin(4 * kPi * x[1]);
        CHECK(std::abs(evaluate_value(p, x) - want) < 1e-12);
    }

    const Eigenfunction t = make_separable_eigenfunction(3, 1, SeparableKind::product_of_sines);
    CHECK(t.freqset.energy == 3);
    int pairs = 0;
    for (Eigen::Index i = 0; i < t.b.size(); ++i)
        if (t.b[i] != 0 || t.c[i] != 0) ++pairs;
    CHECK(pairs == 4);
    for (int i = 0; i < 100; ++i) {
        Vec x(3);
        x[0] = rng.uniform(1000 + 3 * i);
        x[1] = rng.uniform(1001 + 3 * i);
        x[2] = rng.uniform(1002 + 3 * i);
        const double want = std::sin(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]) *
                            std::sin(2 * kPi * x[2]);
        CHECK(std::abs(evaluate_value(t, x) - want) < 1e-12);
    }
}

TEST_CASE("default grid policy") {
    CHECK(default_grid(1) == 64);
    CHECK(default_grid(25) == 80);
    CHECK(default_grid(65) == 128);
    CHECK(default_grid(1105) == 528);
}
