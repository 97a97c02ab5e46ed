#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "agdkit/noise.hpp"
#include "agdkit/run_config.hpp"
#include "agdkit/schedules.hpp"

namespace agdkit {

// Specializations of the three-sequence template
//   xbar_t   = alpha_t x_t + (1 - alpha_t) xtilde_t
//   g_t      = stochastic gradient at xbar_t
//   x_{t+1}  = x_t - theta_t g_t
//   xtilde_{t+1} = xbar_t - gamma_t g_t
enum class PolicyKind {
    sgd,                 // gamma = theta = eta (constant)
    rsag_const,          // gamma = (1 + alpha) theta, alpha = 2/(t+1), theta = eta
    nesterov,            // gamma = alpha theta, theta = eta
    rsag_adaptive,       // gamma = (1 + alpha) eta_t, alpha = 2/(t+1)
    adagrad_norm,        // gamma = theta = eta_t
    adagrad_norm_avg_2,  // gamma = 0, theta = alpha eta_t, alpha = 2/(t+1)
    adagrad_norm_avg_1,  // gamma = 0, theta = alpha eta_t, alpha = 1/t
};

bool is_adaptive(PolicyKind kind);
const char* to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(std::string_view text);

struct AgdPolicy {
    PolicyKind kind = PolicyKind::sgd;
    double eta = 0.1;  // constant step, or adaptive numerator
    double g0 = 1.0;   // adaptive kinds only
};

struct PolicyCoefficients {
    double alpha = 1.0, theta = 0.0, gamma = 0.0;
};

double policy_alpha(PolicyKind kind, std::size_t t);

// Coefficients at iteration t.  Adaptive kinds read eta_t from the
// accumulator, which must already have absorbed ||g_t||^2; passing no
// accumulator for an adaptive kind is an error.
PolicyCoefficients policy_coefficients(const AgdPolicy& policy, std::size_t t,
                                       const AdaGradNorm* accumulator);

struct AveragingWeights {
    double alpha = 1.0;
    double gamma_cum = 1.0;  // Gamma_t = (1 - alpha_t) Gamma_{t-1}, Gamma_1 = 1
};

// Weights for alpha_t = 2/(t+1), t = 1..t_max.
std::vector<AveragingWeights> gamma_weights(std::size_t t_max);
// Same recursion under the policy's own alpha schedule.
std::vector<AveragingWeights> gamma_weights_for(PolicyKind kind, std::size_t t_max);

struct IterateState {
    Vector x, x_tilde;
    std::size_t t = 1;
};

struct StepRecord {
    std::size_t t = 0;
    double f_xbar = 0.0;
    double grad_sq = 0.0;   // ||grad f(xbar_t)||^2
    double delta_bar = 0.0; // f(xbar_t) - f*
    double g_sq = 0.0;      // ||g_t||^2
    double theta = 0.0, gamma = 0.0, alpha = 1.0;
    double eta_t = 0.0;
    double g_acc_before_sq = 0.0;  // G_{t-1}^2 (adaptive kinds; 0 otherwise)
    double g_acc_after_sq = 0.0;   // G_t^2
};

struct RunOptions {
    std::size_t snapshot_stride = 0;  // 0 disables snapshots
    bool record_gradients = false;    // keep g_t vectors
};

struct Trajectory {
    std::vector<StepRecord> records;
    Vector xbar_mean;  // running average of xbar_t over recorded steps
    Vector x_final, x_tilde_final;
    std::optional<std::size_t> diverged_at;
    std::vector<Vector> gradients;  // g_t when recorded
    struct Snapshot {
        std::size_t t;
        Vector x, x_tilde;
    };
    std::vector<Snapshot> snapshots;
};

// One template iteration; mutates state (and the accumulator for adaptive
// kinds).  Optionally exposes xbar_t and g_t.  Throws DivergedRun when a
// non-finite value crosses a boundary.
StepRecord step(IterateState& state, const AgdPolicy& policy, StochasticOracle& oracle,
                AdaGradNorm* accumulator, Vector* xbar_out = nullptr, Vector* g_out = nullptr);

// Runs T iterations from x1.  A diverged run returns the completed records
// with diverged_at set to the failing iteration.
Trajectory run(const Problem& p, StochasticOracle& oracle, const AgdPolicy& policy,
               const RunConfig& cfg, const Vector& x1, const RunOptions& options = {});

// Closed-form xbar_t - x_t from the recorded history
//   (1 - alpha_t) Gamma_{t-1} sum_{k<t} ((theta_k - gamma_k) / Gamma_k) g_k.
// Exact oracle for the simulated gap.
Vector closed_form_gap(std::span<const Vector> g, std::span<const double> theta,
                       std::span<const double> gamma, std::span<const double> alpha,
                       double alpha_t);

}  // namespace agdkit
