#pragma once

#include <cstdint>
#include <functional>

#include "agdkit/problems.hpp"
#include "agdkit/random.hpp"

namespace agdkit {

enum class NoiseMode { none, almost_sure, expected, sub_gaussian };

const char* to_string(NoiseMode mode);
NoiseMode noise_mode_from_string(std::string_view text);

// Parameters (A, B, C) of the relaxed affine variance bound
//   ||g(x) - grad f(x)||^2 <= A (f(x) - f*) + B ||grad f(x)||^2 + C
// in its almost-sure, expected-value or sub-Gaussian-moment form.
struct NoiseSpec {
    double a = 0.0, b = 0.0, c = 0.0;
    NoiseMode mode = NoiseMode::none;

    double bound(double gap, double grad_sq) const { return a * gap + b * grad_sq + c; }
    void validate() const;
};

// Stochastic gradient oracle.  Construction by mode:
//  - none:        g(x) = grad f(x)
//  - almost_sure: g = grad f + r*u, u uniform on the unit sphere and r uniform
//                 on [0, sqrt(bound)); every sample satisfies the bound.
//  - expected:    g = grad f + xi, xi isotropic Gaussian with total variance
//                 exactly equal to the bound.
//  - sub_gaussian: Gaussian with the variance scaled by 1/2 and samples with
//                 ||xi||^2 > bound redrawn, so E exp(||xi||^2 / bound) <= e.
//                 The nominal (A, B, C) are what theory calculators should see.
// Owns its RandomStream; single-owner, clone_with_stream for parallel sweeps.
class StochasticOracle {
public:
    StochasticOracle(const Problem& problem, NoiseSpec spec, RandomStream stream);

    Vector sample(const Vector& x);
    // Fast path when the caller already evaluated the objective.
    Vector sample_with(const Vector& x, const Vector& grad, double value);

    const Problem& problem() const { return *problem_; }
    const NoiseSpec& spec() const { return spec_; }
    std::uint64_t queries() const { return queries_; }

    StochasticOracle clone_with_stream(RandomStream stream) const;

private:
    Vector draw_noise(double bound, std::size_t dim);

    const Problem* problem_;
    NoiseSpec spec_;
    RandomStream stream_;
    std::uint64_t queries_ = 0;
};

StochasticOracle make_oracle(const Problem& problem, NoiseSpec spec, RandomStream stream);

struct NoiseCertReport {
    double worst_ratio = 0.0;        // max ||g - grad||^2 / bound over all samples
    double mean_ratio = 0.0;         // pooled mean of the same ratio
    double max_abs_z = 0.0;          // worst per-component unbiasedness z-score
    double moment_estimate = 0.0;    // mean exp(||xi||^2 / bound), sub_gaussian mode
    std::size_t points_used = 0;
    std::size_t points_skipped = 0;  // zero-denominator points
    std::size_t samples_total = 0;
    bool ratio_pass = true;
    bool unbiased_pass = true;
    bool pass = true;
};

using GradientSampler = std::function<Vector(const Vector&)>;

// Statistical certification of the affine-variance bound and unbiasedness at
// random points in [-box_radius, box_radius]^dim.  Pass rules: almost_sure
// needs max ratio <= 1 + 1e-12; expected needs pooled mean ratio
// <= 1 + 3/sqrt(samples); sub_gaussian needs the moment estimate <= 1.05 e;
// unbiasedness needs every per-component |z| <= 4.
NoiseCertReport certify_noise(const Problem& problem, const NoiseSpec& spec,
                              const GradientSampler& sampler, std::size_t points,
                              std::size_t samples_per_point, double box_radius,
                              RandomStream& point_stream);

NoiseCertReport certify_noise(StochasticOracle& oracle, std::size_t points,
                              std::size_t samples_per_point, double box_radius,
                              RandomStream& point_stream);

}  // namespace agdkit
