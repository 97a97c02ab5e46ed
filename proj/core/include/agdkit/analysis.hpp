#pragma once

#include <span>
#include <utility>
#include <vector>

#include "agdkit/agd.hpp"
#include "agdkit/constants.hpp"

namespace agdkit {

// (1/T) sum_t ||grad f(xbar_t)||^2 over the recorded steps.
double avg_sq_grad(const Trajectory& traj);

// f(mean of xbar_t) - f*.
double averaged_iterate_gap(const Trajectory& traj, const Problem& p);

double max_delta_bar(const Trajectory& traj);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (log T, log metric)
};

// Ordinary least squares of log(metric) against log(T); needs >= 3 points
// with positive metrics.
RateFit loglog_slope(std::span<const std::pair<double, double>> t_metric);

// Nearest-rank empirical quantile, q in (0, 1).
double quantile_across_seeds(std::span<const double> values, double q);

struct SumSquareCheck {
    double lhs = 0.0, mid = 0.0, rhs = 0.0;
    bool pass = false;
};
// sqrt(sum a) <= sum a_i / sqrt(prefix_i) <= 2 sqrt(sum a); empty prefixes
// contribute 0.
SumSquareCheck lemma_sum_square(std::span<const double> a);

struct SumLogCheck {
    double lhs = 0.0, rhs = 0.0;
    bool pass = false;
};
// sum a_i / (1 + prefix_i) <= log(1 + sum a).
SumLogCheck lemma_sum_log(std::span<const double> a);

// sqrt(sum a) <= sum sqrt(a_i).
bool lemma_sqrt_sum(std::span<const double> a);

// Max over sampled pairs (||x - y|| <= 1/l1 for generalized problems) of
// |f(y) - f(x) - <grad f(x), y - x>| minus the smoothness quadratic bound;
// passing means <= 1e-9.
double lemma_descent(const Problem& p, std::size_t pairs, double box_radius,
                     RandomStream& stream);

// Max violation of <grad f(x), x - x*> >= f(x) - f* >= 0 over sampled points.
double lemma_convexity(const Problem& p, std::size_t points, double box_radius,
                       RandomStream& stream);

// max_t delta_bar_t <= bound.
bool trajectory_bound_check(const Trajectory& traj, double bound);

// Max violation of |eta_tilde - eta_t| <= 2 eta_tilde sqrt(A d + B |gbar|^2 + C) / G_t
// over random tuples satisfying the almost-sure noise bound.
double eta_tilde_bound_violation(const NoiseSpec& noise, double eta, std::size_t tuples,
                                 RandomStream& stream);

// Max violation of
// |eta_t - eta_hat| <= eta ||gbar - g|| / (sqrt(G^2+||g||^2) sqrt(G^2+||gbar||^2))
// over arbitrary random tuples.
double eta_hat_bound_violation(double eta, std::size_t tuples, RandomStream& stream);

}  // namespace agdkit
