#pragma once

#include <span>
#include <string>
#include <vector>

#include "agdkit/noise.hpp"
#include "agdkit/problems.hpp"
#include "agdkit/run_config.hpp"

namespace agdkit {

// One entry of a step-size min expression.  A candidate whose denominator
// vanishes is +inf: the corresponding constraint is vacuous and drops out of
// the min.
struct StepCandidate {
    std::string name;
    double value = 0.0;
};

// Every derived quantity the prescriptions and diagnostics use.  Only the
// fields relevant to the regime that produced the struct are filled; the rest
// stay zero.  Recomputation is deterministic: equal inputs give bit-identical
// values.
struct TheoryConstants {
    // Function-gap bounds.
    double gap_constant = 0.0;   // constant-step generalized-smooth bound
    double gap_adaptive = 0.0;   // adaptive-step generalized-smooth bound
    double gap_smooth = 0.0;     // adaptive-step L-smooth bound
    double gap_expected = 0.0;   // expected-value constant-step bound

    // Gradient-norm bounds along the trajectory.
    double m_constant = 0.0;
    double m_adaptive = 0.0;

    // Noise magnitude bounds.
    double p_constant = 0.0;
    double p_adaptive = 0.0;
    double q_smooth = 0.0;

    // Constant-step prescription coefficients.
    double coef_a = 0.0, coef_b = 0.0, coef_c = 0.0, coef_g = 0.0;
    double l_convex = 0.0;

    // Adaptive-step auxiliaries.
    double h_log = 0.0;        // AdaGrad denominator log factor
    double f_log = 0.0;        // L-smooth sum-log factor
    double x_factor = 0.0;     // 2A + 4LB + 4L

    // Displacement bounds.
    double y_constant = 0.0;
    double y_expected = 0.0;

    // Noise width at the relevant gap bound.
    double w_adaptive = 0.0;
    double w_smooth = 0.0;

    // Time-uniform concentration factors.
    double a_t_delta = 0.0;
    double b_t_delta = 0.0;

    // Squared-gradient-error budgets.
    double r_adaptive = 0.0;
    double r_smooth = 0.0;

    // Squared distance-to-minimizer bounds (filled when ||x1 - x*|| is known).
    double d_constant_sq = 0.0;
    double d_adaptive_sq = 0.0;
    double d_smooth_sq = 0.0;

    std::vector<StepCandidate> candidates;
    double eta = 0.0;  // min over candidates
};

// Constant-step generalized-smooth function-gap bound: the smallest value
// closing the trajectory induction,
//   8 (delta1 + 1 + 4 log^2(T/delta) + sqrt(2C)/sqrt(L0 T) + 303 L0 / (1792 L1^2)).
double gap_bound_constant(double delta1, double l0, double l1, double c, std::size_t horizon,
                          double delta);

// Adaptive-step analogue:
//   (8/5) (delta1 + log(T/delta) + 1 + 303 L0 / (1792 L1^2)).
double gap_bound_adaptive(double delta1, double l0, double l1, std::size_t horizon, double delta);

// Adaptive-step L-smooth bound, via the sum-log factor and X = 2A + 4LB + 4L.
double gap_bound_smooth(double delta1, double l, const NoiseSpec& noise, double eta, double g0,
                        std::size_t horizon, double delta, double grad1_norm);

// Expected-value constant-step bound: 4 delta1 + 8.
double gap_bound_expected(double delta1);

// l0/(8 l1) + (9/4) sqrt(l0 g + l1^2 g^2): gradient-norm bound given a
// function-gap bound g.
double grad_norm_bound(double l0, double l1, double gap);

// sqrt(A g + 4B (l0 g + l1^2 g^2) + C).
double noise_magnitude_bound(const NoiseSpec& noise, double l0, double l1, double gap);

// sqrt((A + 2 B L) g + C).
double noise_magnitude_bound_smooth(const NoiseSpec& noise, double l, double gap);

// log(1 + 2T (A g + 4(B+1)(l0 g + l1^2 g^2) + C) / g0^2).
double adagrad_log_factor(const NoiseSpec& noise, double l0, double l1, double gap, double g0,
                          std::size_t horizon);

// X = 2A + 4LB + 4L.
double smooth_x_factor(const NoiseSpec& noise, double l);

// log(1 + ((X d1 + 2C) T + X (3 eta |g1| + 9 L eta^2 / 2) T^2 + (9 L eta^2/2) X T^3) / g0^2).
double smooth_sum_log_factor(double delta1, double l, const NoiseSpec& noise, double eta,
                             double g0, std::size_t horizon, double grad1_norm);

// Time-uniform concentration factors 16 log(60 log2(4T) log(6T) / delta) and
// its square.
double concentration_a(std::size_t horizon, double delta);
double concentration_b(std::size_t horizon, double delta);

// eta sqrt(A x + C) / g0 + eta sqrt(B).
double noise_width(const NoiseSpec& noise, double eta, double g0, double x);

// Displacement bounds.
double displacement_bound_constant(const NoiseSpec& noise, double l0, double l1, double gap,
                                   double eta);                              // Y_c
double displacement_bound_expected(const NoiseSpec& noise, double l, double gap, double eta);  // Y_e

// Squared distance-to-minimizer bounds.
double dist_bound_constant_sq(const NoiseSpec& noise, double l0, double l1, double gap,
                              double x1_dist_sq, std::size_t horizon, double delta);
double dist_bound_adaptive_sq(const NoiseSpec& noise, double l0, double l1, double gap,
                              double x1_dist_sq, double eta, double g0, std::size_t horizon,
                              double delta);
double dist_bound_smooth_sq(const NoiseSpec& noise, double l, double gap, double x1_dist_sq,
                            double eta, double g0, std::size_t horizon, double delta,
                            double f_log);

// Squared-gradient-error budgets.
double error_budget_adaptive(const NoiseSpec& noise, double l0, double l1, double gap, double eta,
                             double g0, std::size_t horizon, double delta);  // R for generalized
double error_budget_smooth(const NoiseSpec& noise, double l, double gap, double eta, double g0,
                           std::size_t horizon, double delta);               // R for L-smooth

enum class ConstantStepRegime {
    nonconvex_gs,
    convex_gs,
    nonconvex_smooth_expected,
    convex_smooth_expected,
};

const char* to_string(ConstantStepRegime regime);
ConstantStepRegime constant_step_regime_from_string(std::string_view text);

struct StepPrescription {
    double eta = 0.0;
    TheoryConstants constants;
};

// Constant step size prescribed for the given regime; the problem's
// smoothness kind must match (generalized for *_gs, L-smooth for
// *_smooth_expected).  Vacuous candidates become +inf and drop out.
StepPrescription step_size_constant(ConstantStepRegime regime, const Problem& p,
                                    const NoiseSpec& noise, const RunConfig& cfg, double delta1);

// Upper bound on the AdaGrad-Norm numerator eta for generalized-smooth
// problems, with all four candidates exposed.
StepPrescription step_size_adaptive_bound(const Problem& p, const NoiseSpec& noise,
                                          const RunConfig& cfg, double delta1, double g0);

// Per-iteration diagnostic series.  g_prev_acc_sq[t] is G_{t-1}^2 (the
// accumulator before absorbing ||g_t||^2); g_sq[t] is ||g_t||^2.
struct DiagnosticSeries {
    std::vector<double> p_t;        // generalized-smooth noise magnitude
    std::vector<double> q_t;        // L-smooth noise magnitude
    std::vector<double> eta_tilde;  // decorrelated step, function-gap form
    std::vector<double> eta_hat;    // decorrelated step, gradient form
};

DiagnosticSeries proof_diagnostics(const NoiseSpec& noise, const SmoothnessSpec& smoothness,
                                   double eta, std::span<const double> delta_bar,
                                   std::span<const double> gbar_sq,
                                   std::span<const double> g_prev_acc_sq);

}  // namespace agdkit
