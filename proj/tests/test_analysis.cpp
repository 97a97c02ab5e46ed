#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "agdkit/analysis.hpp"

using namespace agdkit;

namespace {

Trajectory fake_trajectory(const std::vector<double>& grad_sq) {
    Trajectory traj;
    for (std::size_t t = 0; t < grad_sq.size(); ++t) {
        StepRecord r;
        r.t = t + 1;
        r.grad_sq = grad_sq[t];
        r.delta_bar = grad_sq[t];
        traj.records.push_back(r);
    }
    return traj;
}

}  // namespace

TEST_CASE("avg sq grad") {
    CHECK(avg_sq_grad(fake_trajectory({0.0, 0.0, 0.0})) == 0.0);
    CHECK(avg_sq_grad(fake_trajectory({1.0, 3.0})) == doctest::Approx(2.0));
    CHECK_THROWS_AS(avg_sq_grad(Trajectory{}), std::invalid_argument);
}

TEST_CASE("averaged iterate gap") {
    const Problem p = quadratic(2, 1.0);
    Trajectory traj = fake_trajectory({1.0});
    traj.xbar_mean = {0.0, 0.0};
    CHECK(averaged_iterate_gap(traj, p) == 0.0);
    traj.xbar_mean = {1.0, 1.0};
    CHECK(averaged_iterate_gap(traj, p) == doctest::Approx(1.0));
}

TEST_CASE("jensen consistency on convex runs") {
    const Problem p = exp_symmetric(2);
    for (int rep = 0; rep < 100; ++rep) {
        AgdPolicy policy{PolicyKind::sgd, 0.02, 1.0};
        StochasticOracle oracle(p, NoiseSpec{0.2, 0.2, 0.2, NoiseMode::almost_sure},
                                make_stream(std::uint64_t(rep), "jensen"));
        RunConfig cfg{100, 0.1, std::uint64_t(rep), 2};
        Trajectory traj = run(p, oracle, policy, cfg, {1.0, -0.5});
        double mean_gap = 0.0;
        for (const auto& r : traj.records) mean_gap += r.delta_bar;
        mean_gap /= double(traj.records.size());
        CHECK(averaged_iterate_gap(traj, p) <= mean_gap + 1e-12);
    }
}

TEST_CASE("log log slope exact power laws") {
    std::vector<std::pair<double, double>> pts;
    for (double t : {1e2, 1e3, 1e4}) pts.emplace_back(t, 5.0 / std::sqrt(t));
    auto fit = loglog_slope(pts);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    pts.clear();
    for (double t : {1e2, 1e3, 1e4}) pts.emplace_back(t, 7.5);
    CHECK(loglog_slope(pts).slope == doctest::Approx(0.0));

    pts.resize(2);
    CHECK_THROWS_AS(loglog_slope(pts), std::invalid_argument);
    pts = {{1e2, 1.0}, {1e3, 0.0}, {1e4, 1.0}};
    CHECK_THROWS_AS(loglog_slope(pts), std::invalid_argument);
}

TEST_CASE("nearest rank quantiles") {
    std::vector<double> same(17, 3.25);
    CHECK(quantile_across_seeds(same, 0.1) == 3.25);
    CHECK(quantile_across_seeds(same, 0.9) == 3.25);

    std::vector<double> ladder;
    for (int i = 1; i <= 100; ++i) ladder.push_back(double(i));
    CHECK(quantile_across_seeds(ladder, 0.9) == 90.0);
    CHECK(quantile_across_seeds(ladder, 0.5) == 50.0);
    CHECK_THROWS_AS(quantile_across_seeds({}, 0.5), std::invalid_argument);
}

TEST_CASE("sum square lemma") {
    auto one = lemma_sum_square(std::vector<double>{1.0});
    CHECK(one.lhs == doctest::Approx(1.0));
    CHECK(one.mid == doctest::Approx(1.0));
    CHECK(one.rhs == doctest::Approx(2.0));
    CHECK(one.pass);

    auto two = lemma_sum_square(std::vector<double>{1.0, 3.0});
    CHECK(two.lhs == doctest::Approx(2.0));
    CHECK(two.mid == doctest::Approx(2.5));
    CHECK(two.rhs == doctest::Approx(4.0));
    CHECK(two.pass);

    // Zero prefixes contribute nothing.
    auto zeros = lemma_sum_square(std::vector<double>{0.0, 0.0, 4.0});
    CHECK(zeros.mid == doctest::Approx(2.0));
    CHECK(zeros.pass);

    CHECK_THROWS_AS(lemma_sum_square(std::vector<double>{-1.0}), std::invalid_argument);

    RandomStream stream = make_stream(52, "sumsq");
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 1 + (stream.next_u64() % 100);
        std::vector<double> a(n);
        for (double& v : a) v = std::abs(stream.gaussian());
        CHECK(lemma_sum_square(a).pass);
    }
}

TEST_CASE("sum log lemma") {
    auto zeros = lemma_sum_log(std::vector<double>{0.0, 0.0});
    CHECK(zeros.lhs == 0.0);
    CHECK(zeros.rhs == 0.0);
    CHECK(zeros.pass);

    auto ones = lemma_sum_log(std::vector<double>{1.0, 1.0});
    CHECK(ones.lhs == doctest::Approx(5.0 / 6.0));
    CHECK(ones.rhs == doctest::Approx(1.0986122886681098));
    CHECK(ones.pass);

    RandomStream stream = make_stream(53, "sumlog");
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 1 + (stream.next_u64() % 100);
        std::vector<double> a(n);
        for (double& v : a) v = std::abs(stream.gaussian());
        CHECK(lemma_sum_log(a).pass);
    }
}

TEST_CASE("sqrt sum lemma") {
    CHECK(lemma_sqrt_sum(std::vector<double>{4.0}));
    CHECK(lemma_sqrt_sum(std::vector<double>{1.0, 1.0}));
    RandomStream stream = make_stream(54, "sqrtsum");
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 1 + (stream.next_u64() % 100);
        std::vector<double> a(n);
        for (double& v : a) v = std::abs(stream.gaussian());
        CHECK(lemma_sqrt_sum(a));
    }
}

TEST_CASE("descent lemma sweeps") {
    RandomStream stream = make_stream(55, "descent");
    CHECK(lemma_descent(exp_symmetric(1), 10000, 5.0, stream) <= 1e-9);
    CHECK(lemma_descent(quartic(1), 10000, 5.0, stream) <= 1e-9);
    // Quadratic: equality case, settles at zero violation.
    CHECK(std::abs(lemma_descent(quadratic(2, 2.0), 1000, 3.0, stream)) <= 1e-9);
}

TEST_CASE("convexity lemma") {
    RandomStream stream = make_stream(56, "convex");
    CHECK(lemma_convexity(quadratic(3, 1.5), 1000, 5.0, stream) <= 1e-9);
    CHECK(lemma_convexity(exp_symmetric(2), 1000, 3.0, stream) <= 1e-9);
    CHECK(lemma_convexity(quartic(2), 1000, 3.0, stream) <= 1e-9);
    CHECK_THROWS_AS(lemma_convexity(rosenbrock(2), 10, 2.0, stream), std::invalid_argument);
}

TEST_CASE("trajectory bound check") {
    Trajectory traj = fake_trajectory({3.0, 2.0, 1.0});
    CHECK(trajectory_bound_check(traj, std::numeric_limits<double>::infinity()));
    CHECK(trajectory_bound_check(traj, 3.0));
    CHECK_FALSE(trajectory_bound_check(traj, 2.5));
}

TEST_CASE("decorrelated step-size bounds") {
    RandomStream stream = make_stream(57, "eta");
    NoiseSpec noise{1.0, 1.0, 1.0, NoiseMode::almost_sure};
    CHECK(eta_tilde_bound_violation(noise, 0.5, 1000, stream) <= 1e-9);
    CHECK(eta_hat_bound_violation(0.5, 1000, stream) <= 1e-9);
    NoiseSpec c_only{0.0, 0.0, 2.0, NoiseMode::almost_sure};
    CHECK(eta_tilde_bound_violation(c_only, 1.5, 1000, stream) <= 1e-9);
}
