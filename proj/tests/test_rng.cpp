#include <doctest.h>

#include <cmath>

#include "arw/rng.hpp"

using namespace arw;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors for the published 10-round schedule.
    auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                     {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                     {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("normal quantile matches reference values") {
    const struct {
        double p, x;
    } table[] = {
        {1e-12, -7.0344838253011313},   {1e-06, -4.7534243088228987},
        {0.025, -1.9599639845400545},   {0.3, -0.52440051270804089},
        {0.5, 0.0},                     {0.75, 0.67448975019608171},
        {0.975, 1.959963984540054},     {0.999999, 4.7534243088170873},
        {0.1234567, -1.1578790452698413}, {0.87, 1.1263911290388007},
    };
    for (const auto& row : table)
        CHECK(std::abs(normal_quantile(row.p) - row.x) <=
              1e-12 * std::max(1.0, std::abs(row.x)));
}

TEST_CASE("counter stream determinism and independence from order") {
    const CounterRng a(42, 7), b(42, 7), c(43, 7), d(42, 8);
    CHECK(a.bits(0) == b.bits(0));
    CHECK(a.bits(123456789ull) == b.bits(123456789ull));
    CHECK(a.bits(5) != c.bits(5));
    CHECK(a.bits(5) != d.bits(5));
    // random access equals sequential access by construction
    const double x9 = a.normal(9);
    for (int i = 0; i < 9; ++i) (void)a.normal(i);
    CHECK(a.normal(9) == x9);
}

TEST_CASE("uniforms live strictly inside (0,1)") {
    const CounterRng rng(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform(i);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("empirical moments of the normal stream") {
    const CounterRng rng(2024, 3);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(i);
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("derived seeds separate substreams") {
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}
