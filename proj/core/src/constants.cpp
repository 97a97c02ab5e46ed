#include "agdkit/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace agdkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_t_over_delta(std::size_t horizon, double delta) {
    return std::log(double(horizon) / delta);
}

// 1/x with the vacuous-constraint convention: 1/0 = +inf.
double inv(double x) { return x > 0.0 ? 1.0 / x : kInf; }

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double gap_bound_constant(double delta1, double l0, double l1, double c, std::size_t horizon,
                          double delta) {
    require_positive(l0, "gap_bound_constant: l0");
    require_positive(l1, "gap_bound_constant: l1");
    const double lt = log_t_over_delta(horizon, delta);
    return 8.0 * (delta1 + 1.0 + 4.0 * lt * lt + std::sqrt(2.0 * c) / std::sqrt(l0 * double(horizon)) +
                  303.0 * l0 / (1792.0 * l1 * l1));
}

double gap_bound_adaptive(double delta1, double l0, double l1, std::size_t horizon, double delta) {
    require_positive(l0, "gap_bound_adaptive: l0");
    require_positive(l1, "gap_bound_adaptive: l1");
    const double lt = log_t_over_delta(horizon, delta);
    return (8.0 / 5.0) * (delta1 + lt + 1.0 + 303.0 * l0 / (1792.0 * l1 * l1));
}

double smooth_x_factor(const NoiseSpec& noise, double l) {
    return 2.0 * noise.a + 4.0 * l * noise.b + 4.0 * l;
}

double smooth_sum_log_factor(double delta1, double l, const NoiseSpec& noise, double eta,
                             double g0, std::size_t horizon, double grad1_norm) {
    const double x = smooth_x_factor(noise, l);
    const double t = double(horizon);
    const double total = (x * delta1 + 2.0 * noise.c) * t +
                         x * (3.0 * eta * grad1_norm + 4.5 * l * eta * eta) * t * t +
                         4.5 * l * eta * eta * x * t * t * t;
    return std::log(1.0 + total / (g0 * g0));
}

double gap_bound_smooth(double delta1, double l, const NoiseSpec& noise, double eta, double g0,
                        std::size_t horizon, double delta, double grad1_norm) {
    require_positive(l, "gap_bound_smooth: l");
    require_positive(g0, "gap_bound_smooth: g0");
    const double f_log = smooth_sum_log_factor(delta1, l, noise, eta, g0, horizon, grad1_norm);
    const double lt = log_t_over_delta(horizon, delta);
    const double a2bl = noise.a + 2.0 * noise.b * l;
    const double sqrt_c = std::sqrt(noise.c);
    return 4.0 * delta1 + 8.0 * l * eta * eta * f_log + 36.0 * eta * eta * a2bl * lt * lt +
           12.0 * eta * sqrt_c * lt + 64.0 * eta * eta * a2bl * f_log * f_log +
           16.0 * eta * sqrt_c * f_log + 10.0 * l * eta * eta;
}

double gap_bound_expected(double delta1) {
    if (delta1 < 0.0) throw std::invalid_argument("gap_bound_expected: delta1 must be >= 0");
    return 4.0 * delta1 + 8.0;
}

double grad_norm_bound(double l0, double l1, double gap) {
    return l0 / (8.0 * l1) + 2.25 * std::sqrt(l0 * gap + l1 * l1 * gap * gap);
}

double noise_magnitude_bound(const NoiseSpec& noise, double l0, double l1, double gap) {
    return std::sqrt(noise.a * gap + 4.0 * noise.b * (l0 * gap + l1 * l1 * gap * gap) + noise.c);
}

double noise_magnitude_bound_smooth(const NoiseSpec& noise, double l, double gap) {
    return std::sqrt((noise.a + 2.0 * noise.b * l) * gap + noise.c);
}

double adagrad_log_factor(const NoiseSpec& noise, double l0, double l1, double gap, double g0,
                          std::size_t horizon) {
    const double inner = noise.a * gap +
                         4.0 * (noise.b + 1.0) * (l0 * gap + l1 * l1 * gap * gap) + noise.c;
    return std::log(1.0 + 2.0 * double(horizon) * inner / (g0 * g0));
}

double concentration_a(std::size_t horizon, double delta) {
    const double t = double(horizon);
    return 16.0 * std::log(60.0 * std::log2(4.0 * t) * std::log(6.0 * t) / delta);
}

double concentration_b(std::size_t horizon, double delta) {
    const double a = concentration_a(horizon, delta) / 16.0;
    return 16.0 * a * a;
}

double noise_width(const NoiseSpec& noise, double eta, double g0, double x) {
    return eta * std::sqrt(noise.a * x + noise.c) / g0 + eta * std::sqrt(noise.b);
}

double displacement_bound_constant(const NoiseSpec& noise, double l0, double l1, double gap,
                                   double eta) {
    return eta * (std::sqrt(noise.a * gap) +
                  2.0 * (std::sqrt(noise.b) + 1.0) * std::sqrt(l0 * gap + l1 * l1 * gap * gap) +
                  std::sqrt(noise.c));
}

double displacement_bound_expected(const NoiseSpec& noise, double l, double gap, double eta) {
    return eta * std::sqrt(noise.a * gap + 2.0 * l * (noise.b + 1.0) * gap + noise.c);
}

double dist_bound_constant_sq(const NoiseSpec& noise, double l0, double l1, double gap,
                              double x1_dist_sq, std::size_t horizon, double delta) {
    const double curve = l0 * gap + l1 * l1 * gap * gap;
    const double p_sq = noise.a * gap + 4.0 * noise.b * curve + noise.c;
    const double lt = log_t_over_delta(horizon, delta);
    return 2.0 * x1_dist_sq +
           3.0 * (noise.a * gap + 4.0 * (noise.b + 7.0 / 6.0) * curve + noise.c) +
           0.125 * p_sq * p_sq + 18.0 * lt * lt;
}

double error_budget_adaptive(const NoiseSpec& noise, double l0, double l1, double gap, double eta,
                             double g0, std::size_t horizon, double delta) {
    const double inner = noise.a * gap + 4.0 * noise.b * (l0 * gap + l1 * l1 * gap * gap) + noise.c;
    const double lt = log_t_over_delta(horizon, delta);
    return 2.0 * eta * eta * std::log(1.0 + double(horizon) * inner / (2.0 * g0 * g0)) +
           7.0 * eta * eta / (g0 * g0) * inner * lt;
}

double error_budget_smooth(const NoiseSpec& noise, double l, double gap, double eta, double g0,
                           std::size_t horizon, double delta) {
    const double inner = (noise.a + 2.0 * noise.b * l) * gap + noise.c;
    const double lt = log_t_over_delta(horizon, delta);
    return 2.0 * eta * eta * std::log(1.0 + double(horizon) * inner / (2.0 * g0 * g0)) +
           7.0 * eta * eta / (g0 * g0) * inner * lt;
}

double dist_bound_adaptive_sq(const NoiseSpec& noise, double l0, double l1, double gap,
                              double x1_dist_sq, double eta, double g0, std::size_t horizon,
                              double delta) {
    const double r = error_budget_adaptive(noise, l0, l1, gap, eta, g0, horizon, delta);
    const double h = adagrad_log_factor(noise, l0, l1, gap, g0, horizon);
    const double w = noise_width(noise, eta, g0, gap);
    const double at = concentration_a(horizon, delta);
    const double bt = concentration_b(horizon, delta);
    return 2.0 * x1_dist_sq + 4.0 * r + 10.0 * eta * eta * h + 0.5 * eta * eta +
           32.0 * (at * r + w * w * bt) + 8.0 / (eta * eta) * r * r;
}

double dist_bound_smooth_sq(const NoiseSpec& noise, double l, double gap, double x1_dist_sq,
                            double eta, double g0, std::size_t horizon, double delta,
                            double f_log) {
    const double r = error_budget_smooth(noise, l, gap, eta, g0, horizon, delta);
    const double w = noise_width(noise, eta, g0, gap);
    const double at = concentration_a(horizon, delta);
    const double bt = concentration_b(horizon, delta);
    return 2.0 * x1_dist_sq + 4.0 * r + 10.0 * eta * eta * f_log + 0.5 * eta * eta +
           32.0 * (at * r + w * w * bt) + 8.0 / (eta * eta) * r * r;
}

const char* to_string(ConstantStepRegime regime) {
    switch (regime) {
        case ConstantStepRegime::nonconvex_gs: return "nonconvex_gs";
        case ConstantStepRegime::convex_gs: return "convex_gs";
        case ConstantStepRegime::nonconvex_smooth_expected: return "nonconvex_smooth_expected";
        case ConstantStepRegime::convex_smooth_expected: return "convex_smooth_expected";
    }
    return "unknown";
}

ConstantStepRegime constant_step_regime_from_string(std::string_view text) {
    if (text == "nonconvex_gs") return ConstantStepRegime::nonconvex_gs;
    if (text == "convex_gs") return ConstantStepRegime::convex_gs;
    if (text == "nonconvex_smooth_expected") return ConstantStepRegime::nonconvex_smooth_expected;
    if (text == "convex_smooth_expected") return ConstantStepRegime::convex_smooth_expected;
    throw std::invalid_argument("unknown constant step regime: " + std::string(text));
}

namespace {

void finish(StepPrescription& out) {
    double eta = kInf;
    for (const auto& c : out.constants.candidates) eta = std::min(eta, c.value);
    out.eta = eta;
    out.constants.eta = eta;
}

StepPrescription prescribe_generalized_constant(bool convex, const Problem& p,
                                                const NoiseSpec& noise, const RunConfig& cfg,
                                                double delta1) {
    const double l0 = p.smoothness.l0;
    const double l1 = p.smoothness.l1;
    const double sqrt_t = std::sqrt(double(cfg.horizon));

    StepPrescription out;
    TheoryConstants& k = out.constants;
    k.gap_constant = gap_bound_constant(delta1, l0, l1, noise.c, cfg.horizon, cfg.delta);
    k.m_constant = grad_norm_bound(l0, l1, k.gap_constant);
    k.p_constant = noise_magnitude_bound(noise, l0, l1, k.gap_constant);
    const double lm = l0 + l1 * k.m_constant;
    const double curve = l0 * k.gap_constant + l1 * l1 * k.gap_constant * k.gap_constant;
    k.coef_a = 4.0 * std::sqrt(lm * noise.a);
    k.coef_b = 8.0 * lm * (noise.b + 1.0);
    k.coef_c = 2.0 * std::sqrt(lm * noise.c);
    k.coef_g = 8.0 * l1 * (std::sqrt(noise.a * k.gap_constant) +
                           2.0 * (std::sqrt(noise.b) + 1.0) * std::sqrt(curve) +
                           std::sqrt(noise.c));

    k.candidates.push_back({"inv_coef_a_sqrt_t", inv(k.coef_a * sqrt_t)});
    k.candidates.push_back({"inv_coef_b", inv(k.coef_b)});
    k.candidates.push_back({"inv_coef_c_sqrt_t", inv(k.coef_c * sqrt_t)});
    k.candidates.push_back({"inv_coef_g", inv(k.coef_g)});
    k.candidates.push_back(
        {"gap_neg_half", inv(3.0 * (noise.a + 4.0 * noise.b * l0) * std::sqrt(k.gap_constant))});
    k.candidates.push_back(
        {"gap_neg_three_half",
         inv(12.0 * noise.b * l1 * l1 * std::pow(k.gap_constant, 1.5))});

    if (convex) {
        k.l_convex =
            16.0 * (noise.a + 4.0 * (noise.b + 1.0) * (l0 + l1 * l1 * k.gap_constant));
        k.candidates.push_back({"inv_l_convex", inv(k.l_convex)});
        k.candidates.push_back({"inv_two_sqrt_t", inv(2.0 * sqrt_t)});
    }
    finish(out);
    k.y_constant = displacement_bound_constant(noise, l0, l1, k.gap_constant, out.eta);
    return out;
}

StepPrescription prescribe_smooth_expected(bool convex, const Problem& p, const NoiseSpec& noise,
                                           const RunConfig& cfg, double delta1) {
    const double l = p.smoothness.l;
    const double t = double(cfg.horizon);

    StepPrescription out;
    TheoryConstants& k = out.constants;
    k.gap_expected = gap_bound_expected(delta1);

    if (convex) {
        k.candidates.push_back({"inv_4_a_2lb1", inv(4.0 * (noise.a + 2.0 * l * (noise.b + 1.0)))});
        k.candidates.push_back({"inv_sqrt_t", 1.0 / std::sqrt(t)});
    } else {
        k.candidates.push_back({"inv_sqrt_3lat", inv(std::sqrt(3.0 * l * noise.a * t))});
        k.candidates.push_back(
            {"sqrt_2_over_3lct",
             noise.c > 0.0 ? std::sqrt(2.0 / (3.0 * l * noise.c * t)) : kInf});
        const double inner =
            noise.a * k.gap_expected + 2.0 * l * (noise.b + 1.0) * k.gap_expected + noise.c;
        k.candidates.push_back({"sqrt_2_over_5l_inner", std::sqrt(2.0 / (5.0 * l * inner))});
        k.candidates.push_back({"inv_4l_b1", inv(4.0 * l * (noise.b + 1.0))});
    }
    finish(out);
    k.y_expected = displacement_bound_expected(noise, l, k.gap_expected, out.eta);
    return out;
}

}  // namespace

StepPrescription step_size_constant(ConstantStepRegime regime, const Problem& p,
                                    const NoiseSpec& noise, const RunConfig& cfg, double delta1) {
    cfg.validate();
    noise.validate();
    const bool gs = regime == ConstantStepRegime::nonconvex_gs ||
                    regime == ConstantStepRegime::convex_gs;
    if (gs && p.smoothness.kind != SmoothnessSpec::Kind::generalized)
        throw std::invalid_argument("step_size_constant: regime needs a generalized-smooth problem");
    if (!gs && p.smoothness.kind != SmoothnessSpec::Kind::l_smooth)
        throw std::invalid_argument("step_size_constant: regime needs an L-smooth problem");
    const bool convex =
        regime == ConstantStepRegime::convex_gs || regime == ConstantStepRegime::convex_smooth_expected;
    return gs ? prescribe_generalized_constant(convex, p, noise, cfg, delta1)
              : prescribe_smooth_expected(convex, p, noise, cfg, delta1);
}

StepPrescription step_size_adaptive_bound(const Problem& p, const NoiseSpec& noise,
                                          const RunConfig& cfg, double delta1, double g0) {
    cfg.validate();
    noise.validate();
    require_positive(g0, "step_size_adaptive_bound: g0");
    if (p.smoothness.kind != SmoothnessSpec::Kind::generalized)
        throw std::invalid_argument("step_size_adaptive_bound: problem is not generalized smooth");
    const double l0 = p.smoothness.l0;
    const double l1 = p.smoothness.l1;

    StepPrescription out;
    TheoryConstants& k = out.constants;
    k.gap_adaptive = gap_bound_adaptive(delta1, l0, l1, cfg.horizon, cfg.delta);
    k.m_adaptive = grad_norm_bound(l0, l1, k.gap_adaptive);
    k.p_adaptive = noise_magnitude_bound(noise, l0, l1, k.gap_adaptive);
    k.h_log = adagrad_log_factor(noise, l0, l1, k.gap_adaptive, g0, cfg.horizon);
    k.w_adaptive = 0.0;  // depends on eta; filled after the min

    k.candidates.push_back(
        {"inv_2_sqrt_curvature_h", inv(2.0 * std::sqrt((l0 + l1 * k.m_adaptive) * k.h_log))});
    k.candidates.push_back({"inv_8_p_h", inv(8.0 * k.p_adaptive * k.h_log)});
    k.candidates.push_back({"inv_3_p", inv(3.0 * k.p_adaptive)});
    k.candidates.push_back({"inv_8_l1", inv(8.0 * l1)});
    finish(out);
    k.w_adaptive = noise_width(noise, out.eta, g0, k.gap_adaptive);
    k.r_adaptive =
        error_budget_adaptive(noise, l0, l1, k.gap_adaptive, out.eta, g0, cfg.horizon, cfg.delta);
    k.a_t_delta = concentration_a(cfg.horizon, cfg.delta);
    k.b_t_delta = concentration_b(cfg.horizon, cfg.delta);
    return out;
}

DiagnosticSeries proof_diagnostics(const NoiseSpec& noise, const SmoothnessSpec& smoothness,
                                   double eta, std::span<const double> delta_bar,
                                   std::span<const double> gbar_sq,
                                   std::span<const double> g_prev_acc_sq) {
    const std::size_t n = delta_bar.size();
    if (gbar_sq.size() != n || g_prev_acc_sq.size() != n)
        throw std::invalid_argument("proof_diagnostics: series lengths differ");
    DiagnosticSeries out;
    out.eta_tilde.resize(n);
    out.eta_hat.resize(n);
    if (smoothness.kind == SmoothnessSpec::Kind::generalized)
        out.p_t.resize(n);
    else
        out.q_t.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double d = delta_bar[t];
        if (smoothness.kind == SmoothnessSpec::Kind::generalized)
            out.p_t[t] = noise_magnitude_bound(noise, smoothness.l0, smoothness.l1, d);
        else
            out.q_t[t] = noise_magnitude_bound_smooth(noise, smoothness.l, d);
        out.eta_tilde[t] =
            eta / std::sqrt(g_prev_acc_sq[t] + noise.a * d + (noise.b + 1.0) * gbar_sq[t] + noise.c);
        out.eta_hat[t] = eta / std::sqrt(g_prev_acc_sq[t] + gbar_sq[t]);
    }
    return out;
}

}  // namespace agdkit
