#include "agdkit/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace agdkit {

const char* to_string(NoiseMode mode) {
    switch (mode) {
        case NoiseMode::none: return "none";
        case NoiseMode::almost_sure: return "almost_sure";
        case NoiseMode::expected: return "expected";
        case NoiseMode::sub_gaussian: return "sub_gaussian";
    }
    return "unknown";
}

NoiseMode noise_mode_from_string(std::string_view text) {
    if (text == "none") return NoiseMode::none;
    if (text == "almost_sure") return NoiseMode::almost_sure;
    if (text == "expected") return NoiseMode::expected;
    if (text == "sub_gaussian") return NoiseMode::sub_gaussian;
    throw std::invalid_argument("unknown noise mode: " + std::string(text));
}

void NoiseSpec::validate() const {
    if (!(a >= 0.0 && b >= 0.0 && c >= 0.0))
        throw std::invalid_argument("NoiseSpec: A, B, C must be nonnegative");
}

StochasticOracle::StochasticOracle(const Problem& problem, NoiseSpec spec, RandomStream stream)
    : problem_(&problem), spec_(spec), stream_(std::move(stream)) {
    spec_.validate();
}

Vector StochasticOracle::draw_noise(double bound, std::size_t dim) {
    if (bound <= 0.0) return constant_vector(dim, 0.0);
    switch (spec_.mode) {
        case NoiseMode::none:
            return constant_vector(dim, 0.0);
        case NoiseMode::almost_sure: {
            Vector u = stream_.on_unit_sphere(dim);
            scale_in_place(u, stream_.uniform() * std::sqrt(bound));
            return u;
        }
        case NoiseMode::expected: {
            Vector xi = stream_.gaussian_vector(dim);
            scale_in_place(xi, std::sqrt(bound / double(dim)));
            return xi;
        }
        case NoiseMode::sub_gaussian: {
            const double sigma = std::sqrt(0.5 * bound / double(dim));
            for (;;) {
                Vector xi = stream_.gaussian_vector(dim);
                scale_in_place(xi, sigma);
                if (norm_sq(xi) <= bound) return xi;
            }
        }
    }
    return constant_vector(dim, 0.0);
}

Vector StochasticOracle::sample(const Vector& x) {
    Vector grad;
    const double value = problem_->eval_fused(x, grad);
    return sample_with(x, grad, value);
}

Vector StochasticOracle::sample_with(const Vector& x, const Vector& grad, double value) {
    ++queries_;
    if (spec_.mode == NoiseMode::none) return grad;
    const double bound = spec_.bound(value - problem_->f_star, norm_sq(grad));
    Vector g = grad;
    const Vector xi = draw_noise(bound, x.size());
    axpy_in_place(1.0, xi, g);
    require_finite(g, queries_, "oracle output");
    return g;
}

StochasticOracle StochasticOracle::clone_with_stream(RandomStream stream) const {
    return StochasticOracle(*problem_, spec_, std::move(stream));
}

StochasticOracle make_oracle(const Problem& problem, NoiseSpec spec, RandomStream stream) {
    return StochasticOracle(problem, spec, std::move(stream));
}

NoiseCertReport certify_noise(const Problem& problem, const NoiseSpec& spec,
                              const GradientSampler& sampler, std::size_t points,
                              std::size_t samples_per_point, double box_radius,
                              RandomStream& point_stream) {
    NoiseCertReport report;
    report.samples_total = 0;
    double ratio_sum = 0.0;
    double moment_sum = 0.0;
    std::size_t moment_count = 0;

    for (std::size_t k = 0; k < points; ++k) {
        const Vector x = point_stream.uniform_in_box(problem.dim, box_radius);
        const Vector grad = problem.gradient(x);
        const double gap = problem.value(x) - problem.f_star;
        const double bound = spec.bound(gap, norm_sq(grad));
        if (bound <= 0.0 && spec.mode != NoiseMode::none) {
            ++report.points_skipped;
            continue;
        }
        ++report.points_used;

        const std::size_t n = samples_per_point;
        Vector mean(problem.dim, 0.0);
        Vector m2(problem.dim, 0.0);  // sum of squared deviations (Welford)
        for (std::size_t s = 0; s < n; ++s) {
            const Vector g = sampler(x);
            const double err_sq = dist_sq(g, grad);
            const double ratio = bound > 0.0 ? err_sq / bound : 0.0;
            report.worst_ratio = std::max(report.worst_ratio, ratio);
            ratio_sum += ratio;
            ++report.samples_total;
            if (spec.mode == NoiseMode::sub_gaussian && bound > 0.0) {
                moment_sum += std::exp(err_sq / bound);
                ++moment_count;
            }
            for (std::size_t i = 0; i < problem.dim; ++i) {
                const double delta = g[i] - mean[i];
                mean[i] += delta / double(s + 1);
                m2[i] += delta * (g[i] - mean[i]);
            }
        }
        for (std::size_t i = 0; i < problem.dim; ++i) {
            const double var = m2[i] / double(n > 1 ? n - 1 : 1);
            const double se = std::sqrt(var / double(n));
            const double dev = std::abs(mean[i] - grad[i]);
            const double z = se > 0.0 ? dev / se : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            report.max_abs_z = std::max(report.max_abs_z, z);
        }
    }

    if (report.points_used == 0 && spec.mode != NoiseMode::none)
        throw std::invalid_argument("certify_noise: the bound vanished at every sampled point");

    report.mean_ratio = report.samples_total > 0 ? ratio_sum / double(report.samples_total) : 0.0;
    if (moment_count > 0) report.moment_estimate = moment_sum / double(moment_count);

    switch (spec.mode) {
        case NoiseMode::none:
            report.ratio_pass = report.worst_ratio == 0.0;
            break;
        case NoiseMode::almost_sure:
            report.ratio_pass = report.worst_ratio <= 1.0 + 1e-12;
            break;
        case NoiseMode::expected:
            report.ratio_pass =
                report.mean_ratio <= 1.0 + 3.0 / std::sqrt(double(report.samples_total));
            break;
        case NoiseMode::sub_gaussian:
            report.ratio_pass = report.moment_estimate <= std::exp(1.0) * 1.05;
            break;
    }
    report.unbiased_pass = report.max_abs_z <= 4.0;
    report.pass = report.ratio_pass && report.unbiased_pass;
    return report;
}

NoiseCertReport certify_noise(StochasticOracle& oracle, std::size_t points,
                              std::size_t samples_per_point, double box_radius,
                              RandomStream& point_stream) {
    return certify_noise(
        oracle.problem(), oracle.spec(), [&oracle](const Vector& x) { return oracle.sample(x); },
        points, samples_per_point, box_radius, point_stream);
}

}  // namespace agdkit
