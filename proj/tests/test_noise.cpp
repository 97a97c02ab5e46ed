#include <doctest.h>

#include <cmath>

#include "agdkit/noise.hpp"

using namespace agdkit;

TEST_CASE("none mode returns the exact gradient") {
    const Problem p = quadratic(3, 1.0);
    StochasticOracle oracle(p, NoiseSpec{}, make_stream(1, "noise"));
    const Vector x{1.0, -2.0, 0.5};
    const Vector g = oracle.sample(x);
    const Vector grad = p.gradient(x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(g[i] == grad[i]);
    CHECK(oracle.queries() == 1);
}

TEST_CASE("almost sure mode never violates the bound") {
    const Problem p = quadratic(2, 1.0);
    NoiseSpec spec{0.0, 0.0, 1.0, NoiseMode::almost_sure};
    StochasticOracle oracle(p, spec, make_stream(2, "noise"));
    const Vector x{1.0, 1.0};
    const Vector grad = p.gradient(x);
    for (int k = 0; k < 100000; ++k) {
        const Vector g = oracle.sample(x);
        CHECK(dist_sq(g, grad) <= 1.0);
    }
}

TEST_CASE("expected mode matches the variance budget") {
    // At x=2 on quadratic(1,1): gap = 2, |grad|^2 = 4, so the budget under
    // (A,B,C) = (1,1,1) is 7.
    const Problem p = quadratic(1, 1.0);
    NoiseSpec spec{1.0, 1.0, 1.0, NoiseMode::expected};
    StochasticOracle oracle(p, spec, make_stream(3, "noise"));
    const Vector x{2.0};
    const Vector grad = p.gradient(x);
    double sum = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) sum += dist_sq(oracle.sample(x), grad);
    CHECK(sum / n == doctest::Approx(7.0).epsilon(0.01));
}

TEST_CASE("sub gaussian moment condition") {
    const Problem p = quadratic(2, 1.0);
    NoiseSpec spec{1.0, 0.5, 1.0, NoiseMode::sub_gaussian};
    StochasticOracle oracle(p, spec, make_stream(4, "noise"));
    const Vector x{1.5, -0.5};
    const Vector grad = p.gradient(x);
    const double bound = spec.bound(p.value(x) - p.f_star, norm_sq(grad));
    double moment = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) moment += std::exp(dist_sq(oracle.sample(x), grad) / bound);
    CHECK(moment / n <= std::exp(1.0) * 1.05);
}

TEST_CASE("every mode is unbiased at random points") {
    const Problem p = exp_symmetric(2);
    const NoiseMode modes[] = {NoiseMode::almost_sure, NoiseMode::expected,
                               NoiseMode::sub_gaussian};
    RandomStream points = make_stream(5, "points");
    for (NoiseMode mode : modes) {
        NoiseSpec spec{0.5, 0.5, 0.5, mode};
        StochasticOracle oracle(p, spec, make_stream(6, "noise"));
        for (int pt = 0; pt < 20; ++pt) {
            const Vector x = points.uniform_in_box(2, 2.0);
            const Vector grad = p.gradient(x);
            const int n = 100000;
            Vector mean(2, 0.0), m2(2, 0.0);
            for (int k = 0; k < n; ++k) {
                const Vector g = oracle.sample(x);
                for (std::size_t i = 0; i < 2; ++i) {
                    const double d = g[i] - mean[i];
                    mean[i] += d / double(k + 1);
                    m2[i] += d * (g[i] - mean[i]);
                }
            }
            for (std::size_t i = 0; i < 2; ++i) {
                const double se = std::sqrt(m2[i] / double(n - 1) / double(n));
                CHECK(std::abs(mean[i] - grad[i]) <= 5.0 * se + 1e-12);
            }
        }
    }
}

TEST_CASE("certifier passes admissible oracles") {
    const Problem p = exp_symmetric(2);
    NoiseSpec spec{1.0, 1.0, 1.0, NoiseMode::almost_sure};
    StochasticOracle oracle(p, spec, make_stream(7, "noise"));
    RandomStream points = make_stream(8, "points");
    auto report = certify_noise(oracle, 100, 1000, 2.0, points);
    CHECK(report.pass);
    CHECK(report.worst_ratio <= 1.0 + 1e-12);
    CHECK(report.max_abs_z <= 4.0);
}

TEST_CASE("certifier fails a biased oracle") {
    const Problem p = quadratic(2, 1.0);
    NoiseSpec spec{0.0, 0.0, 1.0, NoiseMode::expected};
    StochasticOracle oracle(p, spec, make_stream(9, "noise"));
    RandomStream points = make_stream(10, "points");
    auto biased = [&oracle](const Vector& x) {
        Vector g = oracle.sample(x);
        for (double& v : g) v += 0.1;
        return g;
    };
    auto report = certify_noise(p, spec, biased, 4, 1000000, 2.0, points);
    CHECK(report.max_abs_z > 4.0);
    CHECK_FALSE(report.unbiased_pass);
    CHECK_FALSE(report.pass);
}

TEST_CASE("none mode certifies trivially") {
    const Problem p = quadratic(2, 1.0);
    StochasticOracle oracle(p, NoiseSpec{}, make_stream(11, "noise"));
    RandomStream points = make_stream(12, "points");
    auto report = certify_noise(oracle, 10, 100, 2.0, points);
    CHECK(report.pass);
    CHECK(report.worst_ratio == 0.0);
    CHECK(report.max_abs_z == 0.0);
}

TEST_CASE("certifier rejects an all-zero denominator") {
    // Zero noise parameters: the bound vanishes everywhere.
    const Problem p = quadratic(2, 1.0);
    NoiseSpec spec{0.0, 0.0, 0.0, NoiseMode::almost_sure};
    StochasticOracle oracle(p, spec, make_stream(13, "noise"));
    RandomStream points = make_stream(14, "points");
    CHECK_THROWS_AS(certify_noise(oracle, 10, 10, 2.0, points), std::invalid_argument);
}

TEST_CASE("clone with new stream is independent") {
    const Problem p = quadratic(1, 1.0);
    NoiseSpec spec{0.0, 0.0, 1.0, NoiseMode::expected};
    StochasticOracle a(p, spec, make_stream(15, "noise"));
    StochasticOracle b = a.clone_with_stream(make_stream(15, "noise"));
    const Vector x{1.0};
    CHECK(a.sample(x)[0] == b.sample(x)[0]);
    StochasticOracle c = a.clone_with_stream(make_stream(16, "noise"));
    bool differs = false;
    for (int i = 0; i < 10; ++i)
        if (a.sample(x)[0] != c.sample(x)[0]) differs = true;
    CHECK(differs);
}

TEST_CASE("noise spec validation") {
    NoiseSpec bad{-1.0, 0.0, 0.0, NoiseMode::none};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK(noise_mode_from_string("sub_gaussian") == NoiseMode::sub_gaussian);
    CHECK_THROWS_AS(noise_mode_from_string("bogus"), std::invalid_argument);
}
