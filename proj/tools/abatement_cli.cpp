#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abatement/config.hpp"
#include "abatement/errors.hpp"
#include "abatement/scenario.hpp"
#include "abatement/verify.hpp"

using namespace abatement;

namespace {

std::pair<double, double> parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("calibration point must be 'warming_K,fraction': " + text);
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ConfigError("calibration point must be 'warming_K,fraction': " + text);
    }
}

int cmd_solve(const std::string& config_path, const std::string& out, double dt, long long seed, int threads) {
    ScenarioConfig cfg = load_scenario(config_path);
    if (dt > 0.0) cfg.solver.dt = dt;
    if (seed >= 0) cfg.perturbation.seed = static_cast<std::uint64_t>(seed);
    cfg.validate();
    const auto rows = run_scenario(cfg, {out, threads});
    int failed = 0;
    for (const auto& r : rows) {
        if (r.ok) {
            std::printf("%-16s M_tot=%-8g tax(N)=%.6g $/ton  tax growth=%.6g  cost=%.6g trillion $\n", r.label.c_str(),
                        r.m_tot, r.path.tax_start(), r.growth.rate, r.path.discounted_total);
        } else {
            ++failed;
            std::fprintf(stderr, "error: %s\n", r.message.c_str());
        }
    }
    std::printf("wrote %zu pathways to %s\n", rows.size() - static_cast<std::size_t>(failed),
                (out.empty() ? cfg.output_dir : out).c_str());
    return failed == 0 ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out, double dt, int threads) {
    SweepSpec spec = load_sweep(config_path);
    if (dt > 0.0) spec.scenario.solver.dt = dt;
    const auto cells = run_sweep(spec, threads);
    std::filesystem::path target = spec.output;
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        target = std::filesystem::path(out) / std::filesystem::path(spec.output).filename();
    }
    std::ofstream f(target, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + target.string());
    f << sweep_csv(spec, cells);
    int failed = 0;
    for (const auto& c : cells) {
        if (!c.error.empty()) {
            ++failed;
            std::fprintf(stderr, "cell (%g, %g): %s\n", c.x1, c.x2, c.error.c_str());
        }
    }
    std::printf("wrote %zu cells to %s\n", cells.size(), target.string().c_str());
    return failed == 0 ? 0 : 2;
}

int cmd_verify() {
    int failures = 0;
    for (const auto& r : run_acceptance()) {
        std::printf("%s\n", format_result(r).c_str());
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

int cmd_calibrate(const std::string& variant, const std::string& p1, const std::string& p2, double alpha,
                  double t0) {
    const auto a = parse_point(p1);
    const auto b = parse_point(p2);
    DamageKind kind;
    if (variant == "power-law") {
        kind = DamageKind::power_law;
    } else if (variant == "logistic") {
        kind = DamageKind::logistic;
    } else {
        throw ConfigError("--variant must be power-law or logistic");
    }
    const DamageModel d = calibrate_damage(kind, {a.first, a.second}, {b.first, b.second}, alpha, t0);
    if (const auto* p = std::get_if<PowerLawDamage>(&d.shape)) {
        std::printf("{\"model\": \"power-law\", \"d0\": %.12g, \"d1\": %.12g, \"T0\": %.12g}\n", p->d0, p->d1, p->t0);
    } else if (const auto* l = std::get_if<LogisticDamage>(&d.shape)) {
        std::printf("{\"model\": \"logistic\", \"d2\": %.12g, \"E_D\": %.12g}\n", l->d2, l->e_d);
    }
    std::printf("residuals: %.3g %.3g\n", std::abs(damage_fraction(d, a.first / alpha) - a.second),
                std::abs(damage_fraction(d, b.first / alpha) - b.second));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-minimizing CO2 abatement pathways under a cumulative-emissions budget"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    double dt = 0.0;
    long long seed = -1;
    int threads = 0;

    auto* solve = app.add_subcommand("solve", "solve every (variant, M_tot) pair of a scenario file");
    solve->add_option("--config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("--out", out, "output directory (default: output_dir from the config)");
    solve->add_option("--dt", dt, "override solver step, years")->check(CLI::PositiveNumber);
    solve->add_option("--seed", seed, "override perturbation seed")->check(CLI::NonNegativeNumber);
    solve->add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    auto* sweep = app.add_subcommand("sweep", "evaluate a response over a two-parameter grid");
    sweep->add_option("--config", config_path, "sweep JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out, "output directory (default: path in the sweep file)");
    sweep->add_option("--dt", dt, "override solver step, years")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    auto* verify = app.add_subcommand("verify", "run the built-in acceptance checks");

    std::string variant = "power-law";
    std::string p1;
    std::string p2;
    double alpha = kDefaultTcre;
    double t0 = 10.0;
    auto* calibrate = app.add_subcommand("calibrate-damage", "damage parameters through two (warming K, fraction) points");
    calibrate->add_option("--variant", variant, "power-law or logistic");
    calibrate->add_option("--p1", p1, "first point, e.g. 2.5,0.05")->required();
    calibrate->add_option("--p2", p2, "second point, e.g. 5,0.20")->required();
    calibrate->add_option("--alpha", alpha, "TCRE, K per Gton CO2")->check(CLI::PositiveNumber);
    calibrate->add_option("--t0", t0, "power-law reference warming, K")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(config_path, out, dt, seed, threads);
        if (*sweep) return cmd_sweep(config_path, out, dt, threads);
        if (*verify) return cmd_verify();
        if (*calibrate) return cmd_calibrate(variant, p1, p2, alpha, t0);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
