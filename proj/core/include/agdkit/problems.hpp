#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agdkit/random.hpp"
#include "agdkit/vec.hpp"

namespace agdkit {

// Smoothness certificate attached to a problem.  `generalized` means the
// local gradient Lipschitz modulus is l0 + l1*||grad f(x)||, valid for
// displacements up to 1/l1.
struct SmoothnessSpec {
    enum class Kind { l_smooth, generalized };

    Kind kind = Kind::l_smooth;
    double l = 0.0;              // kind == l_smooth
    double l0 = 0.0, l1 = 0.0;   // kind == generalized

    static SmoothnessSpec lipschitz(double l);
    static SmoothnessSpec generalized(double l0, double l1);

    // Largest displacement the generalized certificate covers (+inf for l_smooth).
    double pair_radius() const;
};

// Deterministic objective with analytic gradient, known infimum and
// smoothness certificate.  Evaluations are pure; instances are immutable
// after construction and safe to share across threads.
struct Problem {
    std::size_t dim = 0;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    // Fused evaluation; returns f(x) and writes the gradient.
    std::function<double(const Vector&, Vector&)> value_and_gradient;
    double f_star = 0.0;
    std::optional<Vector> x_star;
    SmoothnessSpec smoothness;
    bool convex = false;
    std::string name;

    double eval_fused(const Vector& x, Vector& grad_out) const;
};

// f(x) = (curvature/2) ||x||^2, L-smooth with L = curvature.
Problem quadratic(std::size_t dim, double curvature);

// f(x) = sum_i (exp(x_i) + exp(-x_i) - 2), generalized smooth.
Problem exp_symmetric(std::size_t dim);

// f(x) = sum_i x_i^4, generalized smooth with (l0, l1) = (12, 3).
Problem quartic(std::size_t dim);

// Chained Rosenbrock; dim must be even.  Smoothness constants are certified
// over the [-2, 2] benchmark box, not globally.
Problem rosenbrock(std::size_t dim);

// Relabel the smoothness certificate (e.g. an L-smooth problem viewed as
// generalized smooth).  The caller is responsible for re-certifying.
Problem with_smoothness(Problem p, SmoothnessSpec spec);

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::size_t points = 0;
};

// Central finite differences against the analytic gradient at random points
// in [-box_radius, box_radius]^dim, step h = 1e-6 * (1 + ||x||).
GradCheckReport check_gradient(const Problem& p, std::size_t points, double box_radius,
                               RandomStream& stream);

struct SmoothnessCertificate {
    double max_ratio = 0.0;  // max ||grad(x)-grad(y)|| / ((l0+l1||grad(x)||) ||x-y||)
    std::size_t pairs = 0;
    bool pass = false;       // max_ratio <= 1 + 1e-9
};

// Samples pairs with ||x-y|| <= 1/l1 inside the box and reports the worst
// ratio of the generalized-smoothness inequality, both endpoints as anchor.
SmoothnessCertificate certify_generalized_smooth(const Problem& p, double box_radius,
                                                 std::size_t pairs, RandomStream& stream);

// For each l1 in the grid, finds the smallest l0 (plus 5% headroom) such that
// the sampled pair certificate passes over the box.  Every returned spec is
// re-validated with a fresh sample.  Callers pick the candidate that suits
// their prescription; see exp::select_box_smoothness.
std::vector<SmoothnessSpec> box_smoothness_candidates(const Problem& p, double box_radius,
                                                      std::size_t pairs, RandomStream& stream,
                                                      std::span<const double> l1_grid = {});

// Max over sampled x of ||grad f(x)||^2 / (4 l0 D + 4 l1^2 D^2) for
// generalized problems, or ||grad f(x)||^2 / (2 L D) for L-smooth ones, with
// D = f(x) - f*.  The 0/0 case at a minimizer counts as ratio 0.
double check_grad_gap(const Problem& p, std::size_t points, double box_radius,
                      RandomStream& stream);

}  // namespace agdkit
