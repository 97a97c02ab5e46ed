#include <doctest.h>

#include <cmath>
#include <vector>

#include "agdkit/analysis.hpp"
#include "agdkit/random.hpp"
#include "agdkit/schedules.hpp"

using namespace agdkit;

TEST_CASE("accumulator step") {
    AdaGradNorm acc(1.0, 1.0);
    CHECK(acc.absorb(3.0) == doctest::Approx(0.5));  // 1/sqrt(1+3)
    CHECK(acc.g_sq() == doctest::Approx(4.0));
    CHECK_THROWS_AS(acc.absorb(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(AdaGradNorm(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AdaGradNorm(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("zero gradients freeze the step") {
    AdaGradNorm acc(2.0, 4.0);
    for (int t = 0; t < 100; ++t) CHECK(acc.absorb(0.0) == doctest::Approx(0.5));
}

TEST_CASE("unit gradients follow the closed form") {
    AdaGradNorm acc(1.0, 1.0);
    for (int t = 1; t <= 1000; ++t) {
        const double eta_t = acc.absorb(1.0);
        CHECK(eta_t == doctest::Approx(1.0 / std::sqrt(1.0 + double(t))).epsilon(1e-14));
    }
}

TEST_CASE("steps are nonincreasing and the accumulator never shrinks") {
    RandomStream stream = make_stream(21, "sched");
    for (int rep = 0; rep < 100; ++rep) {
        AdaGradNorm acc(0.5, 0.1);
        double prev = acc.eta_now();
        double prev_g = acc.g_sq();
        for (int t = 0; t < 100; ++t) {
            const double inc = std::abs(stream.gaussian());
            const double eta_t = acc.absorb(inc);
            CHECK(eta_t <= prev + 1e-15);
            CHECK(acc.g_sq() >= prev_g);
            CHECK(acc.g_sq() >= acc.g0_sq());
            prev = eta_t;
            prev_g = acc.g_sq();
        }
    }
}

TEST_CASE("telescoping and weighted-sum bounds") {
    RandomStream stream = make_stream(22, "sched");
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 1 + (stream.next_u64() % 50);
        const double g0_sq = 0.5 + stream.uniform();
        AdaGradNorm acc(1.0, std::sqrt(g0_sq));
        double telescoped = 0.0;
        double weighted = 0.0;
        double total = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double inc = std::abs(stream.gaussian());
            const double eta_t = acc.absorb(inc);
            telescoped += inc / acc.g_sq();
            weighted += eta_t * eta_t * inc;
            total += inc;
        }
        const double log_bound = std::log(1.0 + total / g0_sq);
        CHECK(telescoped <= log_bound + 1e-12);
        CHECK(weighted <= log_bound + 1e-12);  // eta = 1
    }
}
