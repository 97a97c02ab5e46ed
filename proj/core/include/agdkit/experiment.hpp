#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "agdkit/analysis.hpp"

namespace agdkit::exp {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ProblemConfig {
    std::string kind = "quadratic";  // quadratic | exp_symmetric | quartic | rosenbrock
    std::size_t dim = 2;
    double curvature = 1.0;            // quadratic only
    std::string smoothness = "shipped";  // shipped | box_fit
    double box_radius = 2.0;           // sampling box for box_fit
    std::size_t fit_pairs = 2048;
};

struct PolicyConfig {
    std::string kind = "sgd";
    bool prescribed = true;    // eta from the step-size prescriptions
    double eta_value = 0.1;    // used when !prescribed, or for L-smooth adaptive runs
    double g0 = 1.0;
    std::string regime = "auto";  // constant-step regime, or "auto"
    double eta_scale = 1.0;    // multiplier on the prescribed eta (must be <= 1)
};

struct SweepConfig {
    std::vector<std::size_t> horizons = {1000};
    double delta = 0.1;
    std::size_t seeds = 1;
    std::uint64_t seed = 1234;
    double start_scale = 1.0;  // x1 = start_scale * ones
    std::size_t snapshot_stride = 0;
};

struct WindowConfig {
    std::string metric;  // avg_sq_grad | averaged_iterate_gap
    double lo = 0.0, hi = 0.0;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ProblemConfig problem;
    NoiseSpec noise;
    PolicyConfig policy;
    SweepConfig sweep;
    std::vector<WindowConfig> windows;
    double quantile = 0.9;

    void validate() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_hash(const ExperimentConfig& config);  // fnv1a-64 of canonical text

// Problem with the configured smoothness certificate.  box_fit picks, among
// the candidates certified over the box, the one whose prescription allows
// the largest step at the largest horizon.
Problem build_problem(const ExperimentConfig& config);

Vector start_point(const ExperimentConfig& config, const Problem& p);

// Step prescription for one horizon; constant kinds go through the regime
// formulas, adaptive kinds through the adaptive numerator bound (generalized
// smoothness) or the configured eta (L-smooth, where any eta is admitted).
StepPrescription prescribe(const ExperimentConfig& config, const Problem& p, std::size_t horizon);

ConstantStepRegime resolve_regime(const ExperimentConfig& config, const Problem& p);

struct SeedSummary {
    double avg_sq_grad = 0.0;
    double averaged_gap = 0.0;
    double max_delta_bar = 0.0;
    bool diverged = false;
};

struct RatePoint {
    std::size_t horizon = 0;
    double eta = 0.0;
    std::vector<SeedSummary> seeds;
    double median_avg_sq_grad = 0.0, quantile_avg_sq_grad = 0.0;
    double median_gap = 0.0, quantile_gap = 0.0;
};

struct WindowResult {
    WindowConfig window;
    double slope = 0.0, r_squared = 0.0;
    bool pass = false;
};

struct RateStudy {
    std::vector<RatePoint> points;
    std::map<std::string, RateFit> fits;  // metric -> fit of the median series
    std::vector<WindowResult> windows;
    bool all_windows_pass = true;
};

// Runs the full sweep: for each horizon, re-prescribes eta, runs the seeds
// (in parallel when jobs > 1; aggregation is order-independent), and fits
// log-log slopes of the median metrics.
RateStudy run_rate_study(const ExperimentConfig& config, const Problem& p, std::size_t jobs = 1);

Trajectory run_single(const ExperimentConfig& config, const Problem& p, std::size_t horizon,
                      std::size_t seed_index, double eta, const RunOptions& options = {});

// columns: t,f_xbar,grad_sq,delta_bar,g_sq,theta,gamma,alpha,eta_t,G_sq
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& hash);
void write_rate_csv(std::ostream& os, const RateStudy& study, const std::string& hash);

int cmd_run(const ExperimentConfig& config, const std::filesystem::path& out_dir);
int cmd_rates(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::size_t jobs);

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double stat = 0.0;  // worst violation / ratio, check-specific
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass = true;
};

VerifyReport run_verify_suite();
int cmd_verify(const std::filesystem::path& out_path);

}  // namespace agdkit::exp
