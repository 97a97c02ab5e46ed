#include "agdkit/agd.hpp"

#include <cmath>
#include <stdexcept>

namespace agdkit {

bool is_adaptive(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::sgd:
        case PolicyKind::rsag_const:
        case PolicyKind::nesterov:
            return false;
        case PolicyKind::rsag_adaptive:
        case PolicyKind::adagrad_norm:
        case PolicyKind::adagrad_norm_avg_2:
        case PolicyKind::adagrad_norm_avg_1:
            return true;
    }
    return false;
}

const char* to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::sgd: return "sgd";
        case PolicyKind::rsag_const: return "rsag_const";
        case PolicyKind::nesterov: return "nesterov";
        case PolicyKind::rsag_adaptive: return "rsag_adaptive";
        case PolicyKind::adagrad_norm: return "adagrad_norm";
        case PolicyKind::adagrad_norm_avg_2: return "adagrad_norm_avg_2";
        case PolicyKind::adagrad_norm_avg_1: return "adagrad_norm_avg_1";
    }
    return "unknown";
}

PolicyKind policy_kind_from_string(std::string_view text) {
    if (text == "sgd") return PolicyKind::sgd;
    if (text == "rsag_const") return PolicyKind::rsag_const;
    if (text == "nesterov") return PolicyKind::nesterov;
    if (text == "rsag_adaptive") return PolicyKind::rsag_adaptive;
    if (text == "adagrad_norm") return PolicyKind::adagrad_norm;
    if (text == "adagrad_norm_avg_2") return PolicyKind::adagrad_norm_avg_2;
    if (text == "adagrad_norm_avg_1") return PolicyKind::adagrad_norm_avg_1;
    throw std::invalid_argument("unknown policy kind: " + std::string(text));
}

double policy_alpha(PolicyKind kind, std::size_t t) {
    if (kind == PolicyKind::adagrad_norm_avg_1) return 1.0 / double(t);
    return 2.0 / double(t + 1);
}

PolicyCoefficients policy_coefficients(const AgdPolicy& policy, std::size_t t,
                                       const AdaGradNorm* accumulator) {
    if (t < 1) throw std::invalid_argument("policy_coefficients: t starts at 1");
    PolicyCoefficients c;
    c.alpha = policy_alpha(policy.kind, t);
    if (is_adaptive(policy.kind)) {
        if (accumulator == nullptr)
            throw std::invalid_argument("policy_coefficients: adaptive kind needs an accumulator");
        const double eta_t = accumulator->eta_now();
        switch (policy.kind) {
            case PolicyKind::rsag_adaptive:
                c.theta = eta_t;
                c.gamma = (1.0 + c.alpha) * eta_t;
                break;
            case PolicyKind::adagrad_norm:
                c.theta = eta_t;
                c.gamma = eta_t;
                break;
            case PolicyKind::adagrad_norm_avg_2:
            case PolicyKind::adagrad_norm_avg_1:
                c.theta = c.alpha * eta_t;
                c.gamma = 0.0;
                break;
            default:
                break;
        }
    } else {
        const double eta = policy.eta;
        switch (policy.kind) {
            case PolicyKind::sgd:
                c.theta = eta;
                c.gamma = eta;
                break;
            case PolicyKind::rsag_const:
                c.theta = eta;
                c.gamma = (1.0 + c.alpha) * eta;
                break;
            case PolicyKind::nesterov:
                c.theta = eta;
                c.gamma = c.alpha * eta;
                break;
            default:
                break;
        }
    }
    return c;
}

std::vector<AveragingWeights> gamma_weights(std::size_t t_max) {
    return gamma_weights_for(PolicyKind::rsag_const, t_max);
}

std::vector<AveragingWeights> gamma_weights_for(PolicyKind kind, std::size_t t_max) {
    if (t_max < 1) throw std::invalid_argument("gamma_weights: t_max must be >= 1");
    std::vector<AveragingWeights> out(t_max);
    out[0] = {policy_alpha(kind, 1), 1.0};
    for (std::size_t t = 2; t <= t_max; ++t) {
        const double alpha = policy_alpha(kind, t);
        out[t - 1] = {alpha, (1.0 - alpha) * out[t - 2].gamma_cum};
    }
    return out;
}

StepRecord step(IterateState& state, const AgdPolicy& policy, StochasticOracle& oracle,
                AdaGradNorm* accumulator, Vector* xbar_out, Vector* g_out) {
    const Problem& p = oracle.problem();
    const std::size_t t = state.t;
    const double alpha = policy_alpha(policy.kind, t);

    Vector xbar = combine(alpha, state.x, 1.0 - alpha, state.x_tilde);
    require_finite(xbar, t, "iterate update");

    Vector grad;
    const double value = p.eval_fused(xbar, grad);
    require_finite(value, t, "objective value");
    require_finite(grad, t, "objective gradient");

    Vector g = oracle.sample_with(xbar, grad, value);

    StepRecord rec;
    rec.t = t;
    rec.f_xbar = value;
    rec.grad_sq = norm_sq(grad);
    rec.delta_bar = value - p.f_star;
    rec.g_sq = norm_sq(g);
    rec.alpha = alpha;

    if (is_adaptive(policy.kind)) {
        if (accumulator == nullptr)
            throw std::invalid_argument("step: adaptive kind needs an accumulator");
        rec.g_acc_before_sq = accumulator->g_sq();
        rec.eta_t = accumulator->absorb(rec.g_sq);
        rec.g_acc_after_sq = accumulator->g_sq();
    } else {
        rec.eta_t = policy.eta;
    }
    const PolicyCoefficients c = policy_coefficients(policy, t, accumulator);
    rec.theta = c.theta;
    rec.gamma = c.gamma;

    // x_{t+1} = x_t - theta g;  xtilde_{t+1} = xbar_t - gamma g.
    axpy_in_place(-c.theta, g, state.x);
    state.x_tilde = xbar;
    axpy_in_place(-c.gamma, g, state.x_tilde);
    require_finite(state.x, t, "iterate update");
    require_finite(state.x_tilde, t, "iterate update");
    state.t = t + 1;

    if (xbar_out != nullptr) *xbar_out = std::move(xbar);
    if (g_out != nullptr) *g_out = std::move(g);
    return rec;
}

Trajectory run(const Problem& p, StochasticOracle& oracle, const AgdPolicy& policy,
               const RunConfig& cfg, const Vector& x1, const RunOptions& options) {
    cfg.validate();
    if (x1.size() != p.dim) throw std::invalid_argument("run: start point dimension mismatch");
    if (&oracle.problem() != &p)
        throw std::invalid_argument("run: oracle is bound to a different problem");

    Trajectory traj;
    traj.records.reserve(cfg.horizon);
    traj.xbar_mean = constant_vector(p.dim, 0.0);

    IterateState state{x1, x1, 1};
    std::optional<AdaGradNorm> acc;
    if (is_adaptive(policy.kind)) acc.emplace(policy.eta, policy.g0);

    Vector xbar;
    Vector g;
    for (std::size_t t = 1; t <= cfg.horizon; ++t) {
        StepRecord rec;
        try {
            rec = step(state, policy, oracle, acc ? &*acc : nullptr, &xbar,
                       options.record_gradients ? &g : nullptr);
        } catch (const DivergedRun& e) {
            traj.diverged_at = e.iteration();
            break;
        }
        traj.records.push_back(rec);
        // Running mean of xbar over the completed steps.
        const double w = 1.0 / double(t);
        for (std::size_t i = 0; i < p.dim; ++i)
            traj.xbar_mean[i] += w * (xbar[i] - traj.xbar_mean[i]);
        if (options.record_gradients) traj.gradients.push_back(g);
        if (options.snapshot_stride > 0 && (t % options.snapshot_stride == 0))
            traj.snapshots.push_back({t, state.x, state.x_tilde});
    }
    traj.x_final = state.x;
    traj.x_tilde_final = state.x_tilde;
    return traj;
}

Vector closed_form_gap(std::span<const Vector> g, std::span<const double> theta,
                       std::span<const double> gamma, std::span<const double> alpha,
                       double alpha_t) {
    const std::size_t n = g.size();
    if (theta.size() != n || gamma.size() != n || alpha.size() != n)
        throw std::invalid_argument("closed_form_gap: history lengths differ");
    if (n == 0) return Vector{};

    Vector sum(g[0].size(), 0.0);
    double gamma_cum = 1.0;  // Gamma_k, ending at Gamma_{t-1}
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) gamma_cum = (1.0 - alpha[k]) * gamma_cum;
        axpy_in_place((theta[k] - gamma[k]) / gamma_cum, g[k], sum);
    }
    scale_in_place(sum, (1.0 - alpha_t) * gamma_cum);
    return sum;
}

}  // namespace agdkit
