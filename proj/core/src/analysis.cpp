#include "agdkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace agdkit {

double avg_sq_grad(const Trajectory& traj) {
    if (traj.records.empty()) throw std::invalid_argument("avg_sq_grad: empty trajectory");
    double s = 0.0;
    for (const auto& r : traj.records) s += r.grad_sq;
    return s / double(traj.records.size());
}

double averaged_iterate_gap(const Trajectory& traj, const Problem& p) {
    if (traj.records.empty()) throw std::invalid_argument("averaged_iterate_gap: empty trajectory");
    return p.value(traj.xbar_mean) - p.f_star;
}

double max_delta_bar(const Trajectory& traj) {
    double m = 0.0;
    for (const auto& r : traj.records) m = std::max(m, r.delta_bar);
    return m;
}

RateFit loglog_slope(std::span<const std::pair<double, double>> t_metric) {
    if (t_metric.size() < 3) throw std::invalid_argument("loglog_slope: need at least 3 points");
    RateFit fit;
    fit.points.reserve(t_metric.size());
    for (const auto& [t, m] : t_metric) {
        if (!(m > 0.0)) throw std::invalid_argument("loglog_slope: metrics must be positive");
        fit.points.emplace_back(std::log(t), std::log(m));
    }
    const double n = double(fit.points.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : fit.points) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : fit.points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

double quantile_across_seeds(std::span<const double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile_across_seeds: empty input");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile_across_seeds: q must be in (0,1)");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t rank = static_cast<std::size_t>(std::ceil(q * double(sorted.size())));
    return sorted[std::max<std::size_t>(rank, 1) - 1];
}

SumSquareCheck lemma_sum_square(std::span<const double> a) {
    SumSquareCheck check;
    double prefix = 0.0;
    for (double v : a) {
        if (v < 0.0) throw std::invalid_argument("lemma_sum_square: negative entry");
        prefix += v;
        if (prefix > 0.0) check.mid += v / std::sqrt(prefix);
    }
    check.lhs = std::sqrt(prefix);
    check.rhs = 2.0 * check.lhs;
    check.pass = check.lhs <= check.mid + 1e-12 && check.mid <= check.rhs + 1e-12;
    return check;
}

SumLogCheck lemma_sum_log(std::span<const double> a) {
    SumLogCheck check;
    double prefix = 0.0;
    for (double v : a) {
        if (v < 0.0) throw std::invalid_argument("lemma_sum_log: negative entry");
        prefix += v;
        check.lhs += v / (1.0 + prefix);
    }
    check.rhs = std::log1p(prefix);
    check.pass = check.lhs <= check.rhs + 1e-12;
    return check;
}

bool lemma_sqrt_sum(std::span<const double> a) {
    double total = 0.0, sum_roots = 0.0;
    for (double v : a) {
        if (v < 0.0) throw std::invalid_argument("lemma_sqrt_sum: negative entry");
        total += v;
        sum_roots += std::sqrt(v);
    }
    return std::sqrt(total) <= sum_roots + 1e-12;
}

double lemma_descent(const Problem& p, std::size_t pairs, double box_radius,
                     RandomStream& stream) {
    const bool generalized = p.smoothness.kind == SmoothnessSpec::Kind::generalized;
    const double radius = generalized
                              ? std::min(p.smoothness.pair_radius(),
                                         2.0 * box_radius * std::sqrt(double(p.dim)))
                              : 2.0 * box_radius * std::sqrt(double(p.dim));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs; ++k) {
        Vector x, y;
        for (;;) {
            x = stream.uniform_in_box(p.dim, box_radius);
            const Vector u = stream.on_unit_sphere(p.dim);
            const double r = stream.uniform_in(0.0, radius);
            y = x;
            axpy_in_place(r, u, y);
            bool inside = true;
            for (double v : y)
                if (std::abs(v) > box_radius) inside = false;
            if (inside) break;
        }
        const Vector gx = p.gradient(x);
        const double fx = p.value(x);
        const double fy = p.value(y);
        const Vector d = sub(y, x);
        const double gap = std::abs(fy - fx - dot(gx, d));
        const double modulus = generalized ? p.smoothness.l0 + p.smoothness.l1 * norm(gx)
                                           : p.smoothness.l;
        const double bound = 0.5 * modulus * norm_sq(d);
        worst = std::max(worst, gap - bound);
    }
    return worst;
}

double lemma_convexity(const Problem& p, std::size_t points, double box_radius,
                       RandomStream& stream) {
    if (!p.convex || !p.x_star)
        throw std::invalid_argument("lemma_convexity: problem is not convex with known minimizer");
    double worst = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        const Vector x = stream.uniform_in_box(p.dim, box_radius);
        const double gap = p.value(x) - p.f_star;
        const double inner = dot(p.gradient(x), sub(x, *p.x_star));
        worst = std::max(worst, gap - inner);  // inner >= gap
        worst = std::max(worst, -gap);         // gap >= 0
    }
    return worst;
}

bool trajectory_bound_check(const Trajectory& traj, double bound) {
    return max_delta_bar(traj) <= bound;
}

double eta_tilde_bound_violation(const NoiseSpec& noise, double eta, std::size_t tuples,
                                 RandomStream& stream) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tuples; ++k) {
        const std::size_t dim = 1 + (stream.next_u64() % 5);
        const double delta_bar = std::abs(stream.gaussian()) * 2.0;
        const Vector gbar = stream.gaussian_vector(dim);
        const double gbar_sq = norm_sq(gbar);
        const double bound = noise.bound(delta_bar, gbar_sq);
        // Admissible sample: the tilde bound relies on the almost-sure form.
        Vector g = gbar;
        if (bound > 0.0) {
            const Vector u = stream.on_unit_sphere(dim);
            axpy_in_place(stream.uniform() * std::sqrt(bound), u, g);
        }
        const double g_prev_sq = 1e-4 + std::abs(stream.gaussian()) * 4.0;
        const double g_acc_sq = g_prev_sq + norm_sq(g);
        const double eta_t = eta / std::sqrt(g_acc_sq);
        const double eta_tilde =
            eta / std::sqrt(g_prev_sq + noise.a * delta_bar + (noise.b + 1.0) * gbar_sq + noise.c);
        const double rhs = 2.0 * eta_tilde * std::sqrt(bound) / std::sqrt(g_acc_sq);
        worst = std::max(worst, std::abs(eta_tilde - eta_t) - rhs);
    }
    return worst;
}

double eta_hat_bound_violation(double eta, std::size_t tuples, RandomStream& stream) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tuples; ++k) {
        const std::size_t dim = 1 + (stream.next_u64() % 5);
        const Vector gbar = stream.gaussian_vector(dim);
        const Vector g = stream.gaussian_vector(dim);
        const double g_prev_sq = 1e-4 + std::abs(stream.gaussian()) * 4.0;
        const double a = g_prev_sq + norm_sq(g);
        const double b = g_prev_sq + norm_sq(gbar);
        const double eta_t = eta / std::sqrt(a);
        const double eta_hat = eta / std::sqrt(b);
        const double rhs = eta * std::sqrt(dist_sq(gbar, g)) / (std::sqrt(a) * std::sqrt(b));
        worst = std::max(worst, std::abs(eta_t - eta_hat) - rhs);
    }
    return worst;
}

}  // namespace agdkit
