#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agdkit/experiment.hpp"

using namespace agdkit;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"({
  "name": "smoke",
  "problem": {"kind": "quadratic", "dim": 2, "curvature": 1.0},
  "noise": {"A": 0, "B": 0, "C": 0, "mode": "none"},
  "policy": {"kind": "sgd", "eta": 0.1},
  "run": {"T": 10, "delta": 0.1, "seeds": 1, "seed": 7, "start_scale": 1.0}
})";

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("agdkit_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config round trip and hash stability") {
    auto c = exp::config_from_json_text(kSmallConfig);
    CHECK(c.name == "smoke");
    CHECK(c.problem.kind == "quadratic");
    CHECK_FALSE(c.policy.prescribed);
    CHECK(c.policy.eta_value == 0.1);
    const std::string text = exp::config_to_json_text(c);
    auto c2 = exp::config_from_json_text(text);
    CHECK(exp::config_to_json_text(c2) == text);
    CHECK(exp::config_hash(c) == exp::config_hash(c2));

    auto c3 = c;
    c3.sweep.seed = 8;
    CHECK(exp::config_hash(c3) != exp::config_hash(c));
}

TEST_CASE("config validation errors name the field") {
    std::string bad = kSmallConfig;
    const auto pos = bad.find("\"delta\": 0.1");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 12, "\"delta\": 1.5");
    try {
        exp::config_from_json_text(bad);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("delta") != std::string::npos);
    }
}

TEST_CASE("cmd_run writes a table and a manifest that reproduce byte-identically") {
    auto config = exp::config_from_json_text(kSmallConfig);
    const fs::path dir1 = temp_dir("run1");
    const fs::path dir2 = temp_dir("run2");
    CHECK(exp::cmd_run(config, dir1) == 0);
    CHECK(exp::cmd_run(config, dir2) == 0);

    const std::string table1 = slurp(dir1 / "trajectory_s0.csv");
    const std::string table2 = slurp(dir2 / "trajectory_s0.csv");
    CHECK(table1 == table2);
    CHECK(slurp(dir1 / "manifest.json") == slurp(dir2 / "manifest.json"));

    // 10 data rows plus comment and header.
    std::size_t lines = 0;
    for (char ch : table1)
        if (ch == '\n') ++lines;
    CHECK(lines == 12);
    CHECK(table1.find("t,f_xbar,grad_sq,delta_bar,g_sq,theta,gamma,alpha,eta_t,G_sq") !=
          std::string::npos);
    CHECK(table1.find(exp::config_hash(config)) != std::string::npos);

    // Manifest echoes the configured eta.
    const std::string manifest = slurp(dir1 / "manifest.json");
    CHECK(manifest.find("\"eta\": 0.1") != std::string::npos);

    // Re-running from the manifest's embedded config reproduces the table.
    // (The manifest's "config" object is itself a valid config document.)
    const std::string mtext = manifest;
    const auto cfg_pos = mtext.find("\"config\"");
    REQUIRE(cfg_pos != std::string::npos);
}

TEST_CASE("manifest round trip reproduces outputs") {
    auto config = exp::config_from_json_text(kSmallConfig);
    const fs::path dir1 = temp_dir("mrt1");
    exp::cmd_run(config, dir1);

    // Parse the manifest, pull out the embedded config, run again.
    std::ifstream in(dir1 / "manifest.json");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string manifest = ss.str();
    // Extract the embedded config by re-serializing through the loader: the
    // manifest stores it under "config".
    auto full = manifest;
    const auto start = full.find("\"config\": {");
    REQUIRE(start != std::string::npos);
    // Cheap but robust: re-load via the JSON parser in config_from_json_text
    // applied to the manifest's config subtree.
    // Locate the balanced object.
    std::size_t i = full.find('{', start);
    int depth = 0;
    std::size_t end = i;
    for (; end < full.size(); ++end) {
        if (full[end] == '{') ++depth;
        if (full[end] == '}') {
            --depth;
            if (depth == 0) break;
        }
    }
    const std::string embedded = full.substr(i, end - i + 1);
    auto config2 = exp::config_from_json_text(embedded);
    const fs::path dir2 = temp_dir("mrt2");
    exp::cmd_run(config2, dir2);
    CHECK(slurp(dir1 / "trajectory_s0.csv") == slurp(dir2 / "trajectory_s0.csv"));
    CHECK(slurp(dir1 / "manifest.json") == slurp(dir2 / "manifest.json"));
}

TEST_CASE("rate study aggregation is independent of the job count") {
    exp::ExperimentConfig config = exp::config_from_json_text(R"({
      "name": "jobs",
      "problem": {"kind": "exp_symmetric", "dim": 2},
      "noise": {"A": 0, "B": 0, "C": 1, "mode": "almost_sure"},
      "policy": {"kind": "adagrad_norm", "eta": 0.5, "g0": 1.0},
      "run": {"T": [50, 100, 200], "delta": 0.1, "seeds": 8, "seed": 42, "start_scale": 0.5}
    })");
    const Problem p = exp::build_problem(config);
    auto serial = exp::run_rate_study(config, p, 1);
    auto parallel = exp::run_rate_study(config, p, 4);
    REQUIRE(serial.points.size() == parallel.points.size());
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        CHECK(serial.points[i].median_avg_sq_grad == parallel.points[i].median_avg_sq_grad);
        CHECK(serial.points[i].quantile_gap == parallel.points[i].quantile_gap);
        for (std::size_t s = 0; s < serial.points[i].seeds.size(); ++s)
            CHECK(serial.points[i].seeds[s].avg_sq_grad ==
                  parallel.points[i].seeds[s].avg_sq_grad);
    }
}

TEST_CASE("prescribed eta flows through the rate study") {
    exp::ExperimentConfig config = exp::config_from_json_text(R"({
      "name": "prescribed",
      "problem": {"kind": "quadratic", "dim": 2, "curvature": 1.0},
      "noise": {"A": 0, "B": 0, "C": 0, "mode": "none"},
      "policy": {"kind": "sgd", "eta": "prescribed", "regime": "convex_smooth_expected"},
      "run": {"T": [16, 64], "delta": 0.1, "seeds": 2, "seed": 1, "start_scale": 1.0}
    })");
    const Problem p = exp::build_problem(config);
    auto study = exp::run_rate_study(config, p, 1);
    REQUIRE(study.points.size() == 2);
    CHECK(study.points[0].eta == doctest::Approx(0.125));   // min(1/8, 1/4)
    CHECK(study.points[1].eta == doctest::Approx(0.125));   // min(1/8, 1/8)
}

TEST_CASE("box fit selection picks a certified spec") {
    exp::ExperimentConfig config = exp::config_from_json_text(R"({
      "name": "boxfit",
      "problem": {"kind": "exp_symmetric", "dim": 2, "smoothness": "box_fit",
                   "box_radius": 1.3, "fit_pairs": 512},
      "noise": {"A": 0, "B": 0, "C": 1, "mode": "almost_sure"},
      "policy": {"kind": "sgd", "eta": "prescribed", "regime": "nonconvex_gs"},
      "run": {"T": [100, 1000], "delta": 0.1, "seeds": 1, "seed": 3, "start_scale": 1.0}
    })");
    const Problem p = exp::build_problem(config);
    REQUIRE(p.smoothness.kind == SmoothnessSpec::Kind::generalized);
    RandomStream stream = make_stream(99, "boxfit-check");
    auto cert = certify_generalized_smooth(p, 1.3, 2000, stream);
    CHECK(cert.pass);
    // The selected certificate admits a no-smaller step than the shipped one.
    auto shipped = exp_symmetric(2);
    RunConfig rc{1000, 0.1, 3, 2};
    auto pres_fit = exp::prescribe(config, p, 1000);
    auto pres_shipped = step_size_constant(ConstantStepRegime::nonconvex_gs, shipped,
                                           config.noise, rc, p.value({1.0, 1.0}) - p.f_star);
    CHECK(pres_fit.eta >= pres_shipped.eta);
}

TEST_CASE("verify suite passes end to end") {
    auto report = exp::run_verify_suite();
    for (const auto& check : report.checks) {
        INFO(check.name);
        CHECK(check.pass);
    }
    CHECK(report.all_pass);
}

TEST_CASE("gamma identity check catches an off-by-one fault") {
    // Injecting a shifted recursion must break the cumulative identity.
    const std::size_t t_max = 50;
    std::vector<double> alpha(t_max), gamma_cum(t_max);
    for (std::size_t t = 1; t <= t_max; ++t) alpha[t - 1] = 2.0 / double(t + 1);
    gamma_cum[0] = 1.0;
    for (std::size_t t = 2; t <= t_max; ++t) {
        // Fault: uses alpha_{t+1} instead of alpha_t.
        gamma_cum[t - 1] = (1.0 - 2.0 / double(t + 2)) * gamma_cum[t - 2];
    }
    double sum_ratio = 0.0;
    double worst = 0.0;
    for (std::size_t t = 1; t <= t_max; ++t) {
        sum_ratio += alpha[t - 1] / gamma_cum[t - 1];
        worst = std::max(worst, std::abs(gamma_cum[t - 1] * sum_ratio - 1.0));
    }
    CHECK(worst > 1e-12);
}
