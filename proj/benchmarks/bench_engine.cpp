#include <benchmark/benchmark.h>

#include "agdkit/agd.hpp"
#include "agdkit/analysis.hpp"

using namespace agdkit;

namespace {

void BM_VectorDot(benchmark::State& state) {
    RandomStream stream = make_stream(1, "bench");
    const Vector x = stream.gaussian_vector(std::size_t(state.range(0)));
    const Vector y = stream.gaussian_vector(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dot(x, y));
}
BENCHMARK(BM_VectorDot)->Arg(10)->Arg(100)->Arg(1000);

void BM_AdaGradAbsorb(benchmark::State& state) {
    AdaGradNorm acc(1.0, 1.0);
    double g_sq = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(acc.absorb(g_sq));
        g_sq = g_sq < 1e12 ? g_sq * 1.0000001 : 0.37;
    }
}
BENCHMARK(BM_AdaGradAbsorb);

void BM_EngineStep(benchmark::State& state) {
    const PolicyKind kind = static_cast<PolicyKind>(state.range(0));
    const Problem p = exp_symmetric(10);
    AgdPolicy policy{kind, 1e-3, 1.0};
    StochasticOracle oracle(p, NoiseSpec{0.0, 0.0, 1.0, NoiseMode::almost_sure},
                            make_stream(2, "bench"));
    IterateState st{constant_vector(10, 1.0), constant_vector(10, 1.0), 1};
    AdaGradNorm acc(policy.eta, policy.g0);
    AdaGradNorm* accp = is_adaptive(kind) ? &acc : nullptr;
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(st, policy, oracle, accp));
        if (st.t > 1u << 20) st = {constant_vector(10, 1.0), constant_vector(10, 1.0), 1};
    }
}
BENCHMARK(BM_EngineStep)
    ->Arg(int(PolicyKind::sgd))
    ->Arg(int(PolicyKind::rsag_const))
    ->Arg(int(PolicyKind::adagrad_norm));

void BM_ClosedFormGap(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    RandomStream stream = make_stream(3, "bench");
    std::vector<Vector> g(n);
    std::vector<double> theta(n), gamma(n), alpha(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = stream.gaussian_vector(10);
        alpha[k] = 2.0 / double(k + 2);
        theta[k] = 0.01;
        gamma[k] = (1.0 + alpha[k]) * theta[k];
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(closed_form_gap(g, theta, gamma, alpha, 2.0 / double(n + 2)));
}
BENCHMARK(BM_ClosedFormGap)->Arg(100)->Arg(1000);

void BM_LemmaSumSquare(benchmark::State& state) {
    RandomStream stream = make_stream(4, "bench");
    std::vector<double> a(std::size_t(state.range(0)));
    for (double& v : a) v = std::abs(stream.gaussian());
    for (auto _ : state) benchmark::DoNotOptimize(lemma_sum_square(a));
}
BENCHMARK(BM_LemmaSumSquare)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
