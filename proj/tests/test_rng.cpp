#include <doctest.h>

#include <cmath>
#include <vector>

#include "episurv/rng.hpp"
#include "testutil.hpp"

using namespace episurv;

TEST_SUITE("rng") {

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
        CHECK(a.exponential() == b.exponential());
        CHECK(a.binomial(50, 0.2) == b.binomial(50, 0.2));
    }
}

TEST_CASE("substream seeds differ and are deterministic") {
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
    CHECK(substream_seed(7, 3) == substream_seed(7, 3));
}

TEST_CASE("uniform stays in [0,1) and uniform_open in (0,1)") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rng.uniform_open();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("uniform_int covers its range") {
    Rng rng(11);
    std::vector<int> seen(5, 0);
    for (int i = 0; i < 5000; ++i) ++seen[rng.uniform_int(5)];
    for (int k = 0; k < 5; ++k) CHECK(seen[static_cast<std::size_t>(k)] > 800);
    CHECK_THROWS_AS(rng.uniform_int(0), std::domain_error);
}

TEST_CASE("moment checks for the variate generators") {
    Rng rng(123);
    const int n = 200000;
    std::vector<double> normals, exps;
    normals.reserve(n);
    exps.reserve(n);
    for (int i = 0; i < n; ++i) {
        normals.push_back(rng.normal());
        exps.push_back(rng.exponential(2.0));
    }
    CHECK(std::abs(testutil::mean_of(normals)) < 4.0 / std::sqrt(n));
    CHECK(testutil::sd_of(normals) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(testutil::mean_of(exps) == doctest::Approx(2.0).epsilon(0.02));
    CHECK(testutil::sd_of(exps) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("binomial sampler moments and edge cases") {
    Rng rng(321);
    CHECK(rng.binomial(100, 0.0) == 0);
    CHECK(rng.binomial(100, 1.0) == 100);
    CHECK(rng.binomial(0, 0.4) == 0);

    const int n = 100000;
    std::vector<double> draws;
    draws.reserve(n);
    for (int i = 0; i < n; ++i)
        draws.push_back(static_cast<double>(rng.binomial(80, 0.15)));
    const double m = 80 * 0.15, v = 80 * 0.15 * 0.85;
    CHECK(testutil::mean_of(draws) == doctest::Approx(m).epsilon(0.01));
    CHECK(testutil::sd_of(draws) * testutil::sd_of(draws) ==
          doctest::Approx(v).epsilon(0.03));

    // p > 1/2 goes through the mirrored path.
    std::vector<double> hi;
    for (int i = 0; i < 50000; ++i)
        hi.push_back(static_cast<double>(rng.binomial(40, 0.9)));
    CHECK(testutil::mean_of(hi) == doctest::Approx(36.0).epsilon(0.01));

    // Large n, small p: the mass-action regime.
    std::vector<double> thin;
    for (int i = 0; i < 20000; ++i)
        thin.push_back(static_cast<double>(rng.binomial(99999, 3e-5)));
    CHECK(testutil::mean_of(thin) == doctest::Approx(99999 * 3e-5).epsilon(0.05));
}

}  // TEST_SUITE
