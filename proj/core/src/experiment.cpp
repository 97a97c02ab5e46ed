#include "agdkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace agdkit::exp {

using nlohmann::json;

namespace {

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

json noise_to_json(const NoiseSpec& n) {
    return json{{"A", n.a}, {"B", n.b}, {"C", n.c}, {"mode", to_string(n.mode)}};
}

NoiseSpec noise_from_json(const json& j) {
    NoiseSpec n;
    n.a = j.value("A", 0.0);
    n.b = j.value("B", 0.0);
    n.c = j.value("C", 0.0);
    n.mode = noise_mode_from_string(j.value("mode", "none"));
    n.validate();
    return n;
}

json constants_to_json(const TheoryConstants& k) {
    json candidates = json::array();
    for (const auto& c : k.candidates) candidates.push_back({{"name", c.name}, {"value", c.value}});
    return json{{"gap_constant", k.gap_constant},
                {"gap_adaptive", k.gap_adaptive},
                {"gap_smooth", k.gap_smooth},
                {"gap_expected", k.gap_expected},
                {"m_constant", k.m_constant},
                {"m_adaptive", k.m_adaptive},
                {"p_constant", k.p_constant},
                {"p_adaptive", k.p_adaptive},
                {"q_smooth", k.q_smooth},
                {"coef_a", k.coef_a},
                {"coef_b", k.coef_b},
                {"coef_c", k.coef_c},
                {"coef_g", k.coef_g},
                {"l_convex", k.l_convex},
                {"h_log", k.h_log},
                {"f_log", k.f_log},
                {"x_factor", k.x_factor},
                {"y_constant", k.y_constant},
                {"y_expected", k.y_expected},
                {"w_adaptive", k.w_adaptive},
                {"w_smooth", k.w_smooth},
                {"a_t_delta", k.a_t_delta},
                {"b_t_delta", k.b_t_delta},
                {"r_adaptive", k.r_adaptive},
                {"r_smooth", k.r_smooth},
                {"d_constant_sq", k.d_constant_sq},
                {"d_adaptive_sq", k.d_adaptive_sq},
                {"d_smooth_sq", k.d_smooth_sq},
                {"candidates", candidates},
                {"eta", k.eta}};
}

}  // namespace

void ExperimentConfig::validate() const {
    if (sweep.horizons.empty()) throw std::invalid_argument("config: run.T must be nonempty");
    for (std::size_t t : sweep.horizons)
        if (t < 1) throw std::invalid_argument("config: run.T entries must be >= 1");
    if (!(sweep.delta > 0.0 && sweep.delta < 1.0))
        throw std::invalid_argument("config: run.delta must lie in (0, 1)");
    if (sweep.seeds < 1) throw std::invalid_argument("config: run.seeds must be >= 1");
    noise.validate();
    if (!(policy.eta_scale > 0.0 && policy.eta_scale <= 1.0))
        throw std::invalid_argument("config: policy.eta_scale must lie in (0, 1]");
    if (!policy.prescribed && !(policy.eta_value > 0.0))
        throw std::invalid_argument("config: policy.eta must be positive");
    if (!(quantile > 0.0 && quantile < 1.0))
        throw std::invalid_argument("config: report.quantile must lie in (0, 1)");
    policy_kind_from_string(policy.kind);
    if (policy.regime != "auto") constant_step_regime_from_string(policy.regime);
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;
    c.name = j.value("name", "experiment");
    if (j.contains("problem")) {
        const json& p = j["problem"];
        c.problem.kind = p.value("kind", "quadratic");
        c.problem.dim = p.value("dim", std::size_t{2});
        c.problem.curvature = p.value("curvature", 1.0);
        c.problem.smoothness = p.value("smoothness", "shipped");
        c.problem.box_radius = p.value("box_radius", 2.0);
        c.problem.fit_pairs = p.value("fit_pairs", std::size_t{2048});
    }
    if (j.contains("noise")) c.noise = noise_from_json(j["noise"]);
    if (j.contains("policy")) {
        const json& p = j["policy"];
        c.policy.kind = p.value("kind", "sgd");
        if (p.contains("eta") && p["eta"].is_number()) {
            c.policy.prescribed = false;
            c.policy.eta_value = p["eta"].get<double>();
        } else {
            c.policy.prescribed = true;
            if (p.contains("eta") && p["eta"].is_string() && p["eta"] != "prescribed")
                throw std::invalid_argument("config: policy.eta must be a number or \"prescribed\"");
        }
        c.policy.g0 = p.value("g0", 1.0);
        c.policy.regime = p.value("regime", "auto");
        c.policy.eta_scale = p.value("eta_scale", 1.0);
    }
    if (j.contains("run")) {
        const json& r = j["run"];
        if (r.contains("T")) {
            c.sweep.horizons.clear();
            if (r["T"].is_array())
                for (const auto& t : r["T"]) c.sweep.horizons.push_back(t.get<std::size_t>());
            else
                c.sweep.horizons.push_back(r["T"].get<std::size_t>());
        }
        c.sweep.delta = r.value("delta", 0.1);
        c.sweep.seeds = r.value("seeds", std::size_t{1});
        c.sweep.seed = r.value("seed", std::uint64_t{1234});
        c.sweep.start_scale = r.value("start_scale", 1.0);
        c.sweep.snapshot_stride = r.value("snapshot_stride", std::size_t{0});
    }
    if (j.contains("report")) {
        const json& r = j["report"];
        c.quantile = r.value("quantile", 0.9);
        if (r.contains("windows"))
            for (const auto& w : r["windows"])
                c.windows.push_back({w.at("metric").get<std::string>(), w.at("lo").get<double>(),
                                     w.at("hi").get<double>()});
    }
    c.validate();
    return c;
}

std::string config_to_json_text(const ExperimentConfig& c) {
    json j;
    j["name"] = c.name;
    j["problem"] = {{"kind", c.problem.kind},
                    {"dim", c.problem.dim},
                    {"curvature", c.problem.curvature},
                    {"smoothness", c.problem.smoothness},
                    {"box_radius", c.problem.box_radius},
                    {"fit_pairs", c.problem.fit_pairs}};
    j["noise"] = noise_to_json(c.noise);
    json policy = {{"kind", c.policy.kind},
                   {"g0", c.policy.g0},
                   {"regime", c.policy.regime},
                   {"eta_scale", c.policy.eta_scale}};
    if (c.policy.prescribed)
        policy["eta"] = "prescribed";
    else
        policy["eta"] = c.policy.eta_value;
    j["policy"] = policy;
    j["run"] = {{"T", c.sweep.horizons},       {"delta", c.sweep.delta},
                {"seeds", c.sweep.seeds},      {"seed", c.sweep.seed},
                {"start_scale", c.sweep.start_scale}, {"snapshot_stride", c.sweep.snapshot_stride}};
    json windows = json::array();
    for (const auto& w : c.windows)
        windows.push_back({{"metric", w.metric}, {"lo", w.lo}, {"hi", w.hi}});
    j["report"] = {{"quantile", c.quantile}, {"windows", windows}};
    return j.dump(2);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_hash(const ExperimentConfig& config) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_to_json_text(config))));
    return buf;
}

namespace {

Problem base_problem(const ProblemConfig& pc) {
    if (pc.kind == "quadratic") return quadratic(pc.dim, pc.curvature);
    if (pc.kind == "exp_symmetric") return exp_symmetric(pc.dim);
    if (pc.kind == "quartic") return quartic(pc.dim);
    if (pc.kind == "rosenbrock") return rosenbrock(pc.dim);
    throw std::invalid_argument("unknown problem kind: " + pc.kind);
}

bool policy_is_adaptive(const ExperimentConfig& c) {
    return is_adaptive(policy_kind_from_string(c.policy.kind));
}

double prescribed_eta_for(const ExperimentConfig& c, const Problem& p, std::size_t horizon,
                          const SmoothnessSpec& spec) {
    Problem candidate = with_smoothness(p, spec);
    ExperimentConfig probe = c;
    StepPrescription pres = prescribe(probe, candidate, horizon);
    return pres.eta;
}

}  // namespace

ConstantStepRegime resolve_regime(const ExperimentConfig& config, const Problem& p) {
    if (config.policy.regime != "auto")
        return constant_step_regime_from_string(config.policy.regime);
    const bool gs = p.smoothness.kind == SmoothnessSpec::Kind::generalized;
    if (gs) return p.convex ? ConstantStepRegime::convex_gs : ConstantStepRegime::nonconvex_gs;
    return p.convex ? ConstantStepRegime::convex_smooth_expected
                    : ConstantStepRegime::nonconvex_smooth_expected;
}

Vector start_point(const ExperimentConfig& config, const Problem& p) {
    return constant_vector(p.dim, config.sweep.start_scale);
}

Problem build_problem(const ExperimentConfig& config) {
    Problem p = base_problem(config.problem);
    if (config.problem.smoothness == "shipped") return p;
    if (config.problem.smoothness != "box_fit")
        throw std::invalid_argument("config: problem.smoothness must be shipped or box_fit");
    if (p.smoothness.kind != SmoothnessSpec::Kind::generalized &&
        config.problem.kind == "quadratic")
        p = with_smoothness(p, SmoothnessSpec::generalized(p.smoothness.l, 1.0));

    RandomStream stream = make_stream(config.sweep.seed, "box-fit/" + config.problem.kind);
    auto candidates =
        box_smoothness_candidates(p, config.problem.box_radius, config.problem.fit_pairs, stream);
    if (p.smoothness.kind == SmoothnessSpec::Kind::generalized)
        candidates.push_back(p.smoothness);
    if (candidates.empty()) throw std::runtime_error("box_fit: no certified candidate");

    // Pick the certificate whose prescription admits the largest step at the
    // largest horizon.
    const std::size_t t_max =
        *std::max_element(config.sweep.horizons.begin(), config.sweep.horizons.end());
    double best_eta = -1.0;
    SmoothnessSpec best = candidates.front();
    for (const auto& cand : candidates) {
        double eta = 0.0;
        try {
            eta = prescribed_eta_for(config, p, t_max, cand);
        } catch (const std::exception&) {
            continue;
        }
        if (std::isfinite(eta) && eta > best_eta) {
            best_eta = eta;
            best = cand;
        }
    }
    return with_smoothness(p, best);
}

StepPrescription prescribe(const ExperimentConfig& config, const Problem& p,
                           std::size_t horizon) {
    RunConfig rc{horizon, config.sweep.delta, config.sweep.seed, p.dim};
    const Vector x1 = start_point(config, p);
    Vector g1;
    const double f1 = p.eval_fused(x1, g1);
    const double delta1 = f1 - p.f_star;

    StepPrescription pres;
    if (!config.policy.prescribed) {
        pres.eta = config.policy.eta_value;
        pres.constants.eta = pres.eta;
        pres.constants.candidates.push_back({"configured", pres.eta});
    } else if (policy_is_adaptive(config)) {
        if (p.smoothness.kind == SmoothnessSpec::Kind::generalized) {
            pres = step_size_adaptive_bound(p, config.noise, rc, delta1, config.policy.g0);
        } else {
            // Any positive numerator is admitted for L-smooth adaptive runs.
            pres.eta = config.policy.eta_value;
            pres.constants.candidates.push_back({"configured", pres.eta});
            pres.constants.gap_smooth =
                gap_bound_smooth(delta1, p.smoothness.l, config.noise, pres.eta, config.policy.g0,
                                 horizon, config.sweep.delta, norm(g1));
            pres.constants.q_smooth =
                noise_magnitude_bound_smooth(config.noise, p.smoothness.l,
                                             pres.constants.gap_smooth);
            pres.constants.f_log = smooth_sum_log_factor(delta1, p.smoothness.l, config.noise,
                                                         pres.eta, config.policy.g0, horizon,
                                                         norm(g1));
            pres.constants.x_factor = smooth_x_factor(config.noise, p.smoothness.l);
            pres.constants.eta = pres.eta;
        }
    } else {
        pres = step_size_constant(resolve_regime(config, p), p, config.noise, rc, delta1);
    }

    pres.eta *= config.policy.eta_scale;
    pres.constants.eta = pres.eta;
    if (!(std::isfinite(pres.eta) && pres.eta > 0.0))
        throw std::runtime_error("prescribe: step size is not a positive finite number");

    if (p.x_star) {
        const double x1_dist_sq = dist_sq(x1, *p.x_star);
        const auto& k = pres.constants;
        if (k.gap_constant > 0.0)
            pres.constants.d_constant_sq =
                dist_bound_constant_sq(config.noise, p.smoothness.l0, p.smoothness.l1,
                                       k.gap_constant, x1_dist_sq, horizon, config.sweep.delta);
        if (k.gap_adaptive > 0.0)
            pres.constants.d_adaptive_sq = dist_bound_adaptive_sq(
                config.noise, p.smoothness.l0, p.smoothness.l1, k.gap_adaptive, x1_dist_sq,
                pres.eta, config.policy.g0, horizon, config.sweep.delta);
        if (k.gap_smooth > 0.0)
            pres.constants.d_smooth_sq = dist_bound_smooth_sq(
                config.noise, p.smoothness.l, k.gap_smooth, x1_dist_sq, pres.eta,
                config.policy.g0, horizon, config.sweep.delta, k.f_log);
    }
    return pres;
}

Trajectory run_single(const ExperimentConfig& config, const Problem& p, std::size_t horizon,
                      std::size_t seed_index, double eta, const RunOptions& options) {
    RunConfig rc{horizon, config.sweep.delta, config.sweep.seed, p.dim};
    AgdPolicy policy{policy_kind_from_string(config.policy.kind), eta, config.policy.g0};
    StochasticOracle oracle(
        p, config.noise,
        make_stream(config.sweep.seed, "noise/" + std::to_string(seed_index)));
    return run(p, oracle, policy, rc, start_point(config, p), options);
}

RateStudy run_rate_study(const ExperimentConfig& config, const Problem& p, std::size_t jobs) {
    config.validate();
    RateStudy study;
    if (jobs == 0) jobs = 1;

    for (std::size_t horizon : config.sweep.horizons) {
        RatePoint point;
        point.horizon = horizon;
        point.eta = prescribe(config, p, horizon).eta;
        point.seeds.assign(config.sweep.seeds, SeedSummary{});

        auto worker = [&](std::size_t begin, std::size_t end) {
            for (std::size_t s = begin; s < end; ++s) {
                Trajectory traj = run_single(config, p, horizon, s, point.eta);
                SeedSummary& sum = point.seeds[s];
                sum.diverged = traj.diverged_at.has_value();
                if (!traj.records.empty()) {
                    sum.avg_sq_grad = avg_sq_grad(traj);
                    sum.averaged_gap = averaged_iterate_gap(traj, p);
                    sum.max_delta_bar = max_delta_bar(traj);
                }
            }
        };
        const std::size_t n = config.sweep.seeds;
        const std::size_t threads = std::min(jobs, n);
        if (threads <= 1) {
            worker(0, n);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (n + threads - 1) / threads;
            for (std::size_t i = 0; i < threads; ++i) {
                const std::size_t b = i * chunk;
                const std::size_t e = std::min(n, b + chunk);
                if (b < e) pool.emplace_back(worker, b, e);
            }
            for (auto& th : pool) th.join();
        }

        std::vector<double> grads, gaps;
        grads.reserve(n);
        gaps.reserve(n);
        for (const auto& s : point.seeds) {
            grads.push_back(s.avg_sq_grad);
            gaps.push_back(s.averaged_gap);
        }
        point.median_avg_sq_grad = quantile_across_seeds(grads, 0.5);
        point.quantile_avg_sq_grad = quantile_across_seeds(grads, config.quantile);
        point.median_gap = quantile_across_seeds(gaps, 0.5);
        point.quantile_gap = quantile_across_seeds(gaps, config.quantile);
        study.points.push_back(std::move(point));
    }

    if (study.points.size() >= 3) {
        std::vector<std::pair<double, double>> grad_pts, gap_pts;
        for (const auto& pt : study.points) {
            grad_pts.emplace_back(double(pt.horizon), pt.median_avg_sq_grad);
            gap_pts.emplace_back(double(pt.horizon), pt.median_gap);
        }
        try {
            study.fits["avg_sq_grad"] = loglog_slope(grad_pts);
        } catch (const std::exception&) {
        }
        try {
            study.fits["averaged_iterate_gap"] = loglog_slope(gap_pts);
        } catch (const std::exception&) {
        }
    }
    for (const auto& w : config.windows) {
        WindowResult res;
        res.window = w;
        auto it = study.fits.find(w.metric);
        if (it != study.fits.end()) {
            res.slope = it->second.slope;
            res.r_squared = it->second.r_squared;
            res.pass = res.slope >= w.lo && res.slope <= w.hi;
        }
        study.all_windows_pass = study.all_windows_pass && res.pass;
        study.windows.push_back(res);
    }
    return study;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& hash) {
    os << "# agdkit " << kLibraryVersion << " config=" << hash << "\n";
    os << "t,f_xbar,grad_sq,delta_bar,g_sq,theta,gamma,alpha,eta_t,G_sq\n";
    for (const auto& r : traj.records) {
        os << r.t << ',' << fmt_full(r.f_xbar) << ',' << fmt_full(r.grad_sq) << ','
           << fmt_full(r.delta_bar) << ',' << fmt_full(r.g_sq) << ',' << fmt_full(r.theta) << ','
           << fmt_full(r.gamma) << ',' << fmt_full(r.alpha) << ',' << fmt_full(r.eta_t) << ','
           << fmt_full(r.g_acc_after_sq) << '\n';
    }
}

void write_rate_csv(std::ostream& os, const RateStudy& study, const std::string& hash) {
    os << "# agdkit " << kLibraryVersion << " config=" << hash << "\n";
    os << "T,eta,median_avg_sq_grad,quantile_avg_sq_grad,median_gap,quantile_gap\n";
    for (const auto& pt : study.points) {
        os << pt.horizon << ',' << fmt_full(pt.eta) << ',' << fmt_full(pt.median_avg_sq_grad)
           << ',' << fmt_full(pt.quantile_avg_sq_grad) << ',' << fmt_full(pt.median_gap) << ','
           << fmt_full(pt.quantile_gap) << '\n';
    }
}

namespace {

json study_to_json(const RateStudy& study) {
    json out;
    json points = json::array();
    for (const auto& pt : study.points)
        points.push_back({{"T", pt.horizon},
                          {"eta", pt.eta},
                          {"median_avg_sq_grad", pt.median_avg_sq_grad},
                          {"quantile_avg_sq_grad", pt.quantile_avg_sq_grad},
                          {"median_gap", pt.median_gap},
                          {"quantile_gap", pt.quantile_gap}});
    out["points"] = points;
    json fits = json::object();
    for (const auto& [metric, fit] : study.fits)
        fits[metric] = {{"slope", fit.slope},
                        {"intercept", fit.intercept},
                        {"r_squared", fit.r_squared}};
    out["fits"] = fits;
    json windows = json::array();
    for (const auto& w : study.windows)
        windows.push_back({{"metric", w.window.metric},
                           {"lo", w.window.lo},
                           {"hi", w.window.hi},
                           {"slope", w.slope},
                           {"pass", w.pass}});
    out["windows"] = windows;
    out["all_windows_pass"] = study.all_windows_pass;
    return out;
}

}  // namespace

int cmd_run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const std::string hash = config_hash(config);
    const Problem p = build_problem(config);
    const std::size_t horizon = config.sweep.horizons.front();
    const StepPrescription pres = prescribe(config, p, horizon);

    json manifest;
    manifest["config"] = json::parse(config_to_json_text(config));
    manifest["config_hash"] = hash;
    manifest["library_version"] = kLibraryVersion;
    manifest["problem_smoothness"] =
        p.smoothness.kind == SmoothnessSpec::Kind::generalized
            ? json{{"kind", "generalized"}, {"l0", p.smoothness.l0}, {"l1", p.smoothness.l1}}
            : json{{"kind", "l_smooth"}, {"l", p.smoothness.l}};
    manifest["constants"] = constants_to_json(pres.constants);
    manifest["eta"] = pres.eta;

    json runs = json::array();
    RunOptions options;
    options.snapshot_stride = config.sweep.snapshot_stride;
    for (std::size_t s = 0; s < config.sweep.seeds; ++s) {
        Trajectory traj = run_single(config, p, horizon, s, pres.eta, options);
        const std::string table_name = "trajectory_s" + std::to_string(s) + ".csv";
        std::ofstream table(out_dir / table_name, std::ios::binary);
        write_trajectory_csv(table, traj, hash);
        json entry = {{"seed_index", s}, {"table", table_name}};
        if (traj.diverged_at)
            entry["diverged_at"] = *traj.diverged_at;
        else
            entry["diverged_at"] = nullptr;
        runs.push_back(entry);
    }
    manifest["runs"] = runs;
    std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";
    return 0;
}

int cmd_rates(const ExperimentConfig& config, const std::filesystem::path& out_dir,
              std::size_t jobs) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const std::string hash = config_hash(config);
    const Problem p = build_problem(config);
    const RateStudy study = run_rate_study(config, p, jobs);

    std::ofstream table(out_dir / "rates.csv", std::ios::binary);
    write_rate_csv(table, study, hash);

    json manifest;
    manifest["config"] = json::parse(config_to_json_text(config));
    manifest["config_hash"] = hash;
    manifest["library_version"] = kLibraryVersion;
    manifest["problem_smoothness"] =
        p.smoothness.kind == SmoothnessSpec::Kind::generalized
            ? json{{"kind", "generalized"}, {"l0", p.smoothness.l0}, {"l1", p.smoothness.l1}}
            : json{{"kind", "l_smooth"}, {"l", p.smoothness.l}};
    json per_t = json::array();
    for (std::size_t horizon : config.sweep.horizons) {
        StepPrescription pres = prescribe(config, p, horizon);
        per_t.push_back({{"T", horizon}, {"constants", constants_to_json(pres.constants)}});
    }
    manifest["prescriptions"] = per_t;
    manifest["study"] = study_to_json(study);
    std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";

    for (const auto& w : study.windows)
        std::printf("%s slope=%.4f window=[%.2f,%.2f] %s\n", w.window.metric.c_str(), w.slope,
                    w.window.lo, w.window.hi, w.pass ? "PASS" : "FAIL");
    return study.windows.empty() || study.all_windows_pass ? 0 : 1;
}

VerifyReport run_verify_suite() {
    VerifyReport report;
    auto add = [&report](const std::string& name, bool pass, double stat,
                         const std::string& note = "") {
        report.checks.push_back({name, pass, stat, note});
        report.all_pass = report.all_pass && pass;
    };

    {  // Cumulative averaging-weight identities for alpha_t = 2/(t+1).
        const std::size_t t_max = 10000;
        auto weights = gamma_weights(t_max);
        double worst_identity = 0.0, worst_closed = 0.0;
        double sum_ratio = 0.0;
        for (std::size_t t = 1; t <= t_max; ++t) {
            const auto& w = weights[t - 1];
            sum_ratio += w.alpha / w.gamma_cum;
            worst_identity = std::max(worst_identity, std::abs(w.gamma_cum * sum_ratio - 1.0));
            const double closed = 2.0 / (double(t) * double(t + 1));
            worst_closed = std::max(worst_closed, std::abs(w.gamma_cum - closed) / closed);
        }
        add("gamma-cumulative-identity", worst_identity <= 1e-12, worst_identity);
        add("gamma-closed-form", worst_closed <= 1e-12, worst_closed);

        // Tail bound over all 1 <= t <= T <= t_max, via suffix sums per T.
        double worst_tail = 0.0;
        std::vector<double> suffix(t_max + 2, 0.0);
        for (std::size_t horizon = 1; horizon <= t_max; ++horizon) {
            suffix[horizon + 1] = 0.0;
            for (std::size_t t = horizon; t >= 1; --t) {
                const auto& w = weights[t - 1];
                suffix[t] = suffix[t + 1] + (1.0 - w.alpha) * w.gamma_cum;
                worst_tail = std::max(worst_tail, suffix[t] * w.alpha / w.gamma_cum);
                if (t == 1) break;
            }
        }
        add("gamma-tail-bound", worst_tail <= 2.0 + 1e-12, worst_tail);
    }

    {  // Closed-form trajectory gap against simulation, every policy kind.
        const PolicyKind kinds[] = {PolicyKind::sgd,          PolicyKind::rsag_const,
                                    PolicyKind::nesterov,     PolicyKind::rsag_adaptive,
                                    PolicyKind::adagrad_norm, PolicyKind::adagrad_norm_avg_2,
                                    PolicyKind::adagrad_norm_avg_1};
        double worst = 0.0;
        const Problem p = quadratic(3, 1.0);
        for (PolicyKind kind : kinds) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                AgdPolicy policy{kind, 0.05, 1.0};
                StochasticOracle oracle(p, NoiseSpec{0.5, 0.5, 0.5, NoiseMode::almost_sure},
                                        make_stream(seed, "verify-gap"));
                IterateState state{constant_vector(p.dim, 1.0), constant_vector(p.dim, 1.0), 1};
                std::optional<AdaGradNorm> acc;
                if (is_adaptive(kind)) acc.emplace(policy.eta, policy.g0);
                std::vector<double> theta, gamma, alpha;
                std::vector<Vector> gs;
                Vector xbar, g;
                for (std::size_t t = 1; t <= 120; ++t) {
                    const Vector x_pre = state.x;
                    const Vector predicted =
                        t == 1 ? constant_vector(p.dim, 0.0)
                               : closed_form_gap(gs, theta, gamma, alpha, policy_alpha(kind, t));
                    StepRecord rec = step(state, policy, oracle, acc ? &*acc : nullptr, &xbar, &g);
                    const Vector sim = sub(xbar, x_pre);
                    for (std::size_t i = 0; i < p.dim; ++i)
                        worst = std::max(worst, std::abs(sim[i] - predicted[i]));
                    theta.push_back(rec.theta);
                    gamma.push_back(rec.gamma);
                    alpha.push_back(rec.alpha);
                    gs.push_back(g);
                }
            }
        }
        add("closed-form-gap", worst <= 1e-10, worst);
    }

    {  // Scalar inequality sweeps.
        RandomStream stream = make_stream(2024, "verify-lemmas");
        double sq_viol = 0.0, log_viol = 0.0;
        bool sqrt_ok = true;
        for (std::size_t k = 0; k < 10000; ++k) {
            const std::size_t n = 1 + (stream.next_u64() % 100);
            std::vector<double> a(n);
            for (double& v : a) v = std::abs(stream.gaussian());
            auto sq = lemma_sum_square(a);
            sq_viol = std::max({sq_viol, sq.lhs - sq.mid, sq.mid - sq.rhs});
            auto lg = lemma_sum_log(a);
            log_viol = std::max(log_viol, lg.lhs - lg.rhs);
            sqrt_ok = sqrt_ok && lemma_sqrt_sum(a);
        }
        add("lemma-sum-square", sq_viol <= 1e-12, sq_viol);
        add("lemma-sum-log", log_viol <= 1e-12, log_viol);
        add("lemma-sqrt-sum", sqrt_ok, 0.0);
    }

    {  // Problem certificates.
        RandomStream stream = make_stream(7, "verify-problems");
        const Problem problems[] = {quadratic(3, 2.0), exp_symmetric(2), quartic(2),
                                    rosenbrock(4)};
        for (const Problem& p : problems) {
            auto gc = check_gradient(p, 100, 2.0, stream);
            add("gradient-check/" + p.name, gc.max_rel_err <= 1e-6, gc.max_rel_err);
            const double box = p.name == "exp_symmetric" ? 5.0 : 2.0;
            const double gg = check_grad_gap(p, 2000, box, stream);
            add("grad-gap/" + p.name, gg <= 1.0 + 1e-9, gg);
            const double desc = lemma_descent(p, 2000, box, stream);
            add("descent/" + p.name, desc <= 1e-9, desc);
            if (p.smoothness.kind == SmoothnessSpec::Kind::generalized) {
                auto cert = certify_generalized_smooth(p, box, 2000, stream);
                add("smoothness-certificate/" + p.name, cert.pass, cert.max_ratio);
            }
            if (p.convex) {
                const double conv = lemma_convexity(p, 2000, box, stream);
                add("convexity/" + p.name, conv <= 1e-9, conv);
            }
        }
    }

    {  // Noise certification, small scale.
        const Problem p = exp_symmetric(2);
        const NoiseMode modes[] = {NoiseMode::almost_sure, NoiseMode::expected,
                                   NoiseMode::sub_gaussian};
        for (NoiseMode mode : modes) {
            NoiseSpec spec{1.0, 1.0, 1.0, mode};
            StochasticOracle oracle(p, spec, make_stream(11, "verify-noise"));
            RandomStream points = make_stream(12, "verify-noise-points");
            auto rep = certify_noise(oracle, 20, 400, 2.0, points);
            add(std::string("noise-certificate/") + to_string(mode), rep.pass,
                mode == NoiseMode::almost_sure ? rep.worst_ratio : rep.mean_ratio);
        }
    }

    {  // Decorrelated step-size perturbation bounds.
        RandomStream stream = make_stream(99, "verify-eta");
        const double tilde =
            eta_tilde_bound_violation(NoiseSpec{1.0, 1.0, 1.0, NoiseMode::almost_sure}, 0.5, 1000,
                                      stream);
        add("eta-tilde-bound", tilde <= 1e-9, tilde);
        const double hat = eta_hat_bound_violation(0.5, 1000, stream);
        add("eta-hat-bound", hat <= 1e-9, hat);
    }

    return report;
}

int cmd_verify(const std::filesystem::path& out_path) {
    VerifyReport report = run_verify_suite();
    json j;
    json checks = json::array();
    for (const auto& c : report.checks) {
        std::printf("%-42s %s  stat=%.3g\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.stat);
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"stat", c.stat}, {"note", c.note}});
    }
    std::size_t passed = 0;
    for (const auto& c : report.checks)
        if (c.pass) ++passed;
    j["checks"] = checks;
    j["checks_total"] = report.checks.size();
    j["checks_passed"] = passed;
    j["all_pass"] = report.all_pass;
    if (!out_path.empty()) {
        if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
        std::ofstream out(out_path, std::ios::binary);
        out << j.dump(2) << "\n";
    }
    std::printf("verify: %zu/%zu checks passed, %s\n", passed, report.checks.size(),
                report.all_pass ? "ALL PASS" : "FAILURES PRESENT");
    return report.all_pass ? 0 : 1;
}

}  // namespace agdkit::exp
