#pragma once

#include <cmath>
#include <stdexcept>

namespace agdkit {

// Scalar AdaGrad-Norm accumulator: G_t^2 = G_0^2 + sum_{k<=t} ||g_k||^2 and
// eta_t = eta / G_t, where G_t^2 includes the current increment.  Single
// source of truth for G_t^2; callers that need G_{t-1}^2 read g_sq() before
// absorbing.
class AdaGradNorm {
public:
    AdaGradNorm(double eta, double g0) : eta_(eta), g0_sq_(g0 * g0), g_sq_(g0 * g0) {
        if (!(eta > 0.0)) throw std::invalid_argument("AdaGradNorm: eta must be positive");
        if (!(g0 > 0.0)) throw std::invalid_argument("AdaGradNorm: g0 must be positive");
    }

    // Adds ||g_t||^2 to the accumulator and returns eta_t.
    double absorb(double g_sq_increment) {
        if (g_sq_increment < 0.0)
            throw std::invalid_argument("AdaGradNorm: squared norm increment must be >= 0");
        g_sq_ += g_sq_increment;
        return eta_ / std::sqrt(g_sq_);
    }

    double eta_now() const { return eta_ / std::sqrt(g_sq_); }
    double eta_base() const { return eta_; }
    double g0_sq() const { return g0_sq_; }
    double g_sq() const { return g_sq_; }

private:
    double eta_;
    double g0_sq_;
    double g_sq_;
};

}  // namespace agdkit
