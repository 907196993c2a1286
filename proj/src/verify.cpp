#include "abatement/verify.hpp"

#include <unistd.h>

#include <chrono>
#include <deque>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "abatement/analytic.hpp"
#include "abatement/errors.hpp"
#include "abatement/scenario.hpp"

namespace abatement {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Models learning_models(LearningModel learning) {
    Models m;
    m.learning = learning;
    return m;
}

Models damage_models(DamageModel damage) {
    Models m;
    m.damage = damage;
    return m;
}

DamageModel reference_damage(DamageKind kind) {
    return calibrate_damage(kind, {2.5, 0.05}, {5.0, 0.20}, kDefaultTcre);
}

struct Solved {
    std::string name;
    Models models;
    Pathway path;
};

// Every pathway the criteria solve, kept for the perturbation and hygiene checks.
std::deque<Solved>& registry() {
    static std::deque<Solved> solved;
    return solved;
}

const Pathway& solve_named(const std::string& name, double m_tot, const Models& models,
                           const SolverConfig& cfg = {}) {
    for (const auto& s : registry()) {
        if (s.name == name) return s.path;
    }
    registry().push_back({name, models, solve_bvp(m_tot, 0.0, models, cfg)});
    return registry().back().path;
}

CriterionResult guarded(int id, const std::string& name, const std::function<CriterionResult()>& body) {
    try {
        CriterionResult r = body();
        r.id = id;
        r.name = name;
        return r;
    } catch (const std::exception& e) {
        return {id, name, false, std::string("exception: ") + e.what()};
    }
}

CriterionResult hotelling() {
    CriterionResult r;
    r.pass = true;
    double slowest = 0.0;
    for (double m_tot : {1000.0, 3000.0, 5000.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const Pathway& p = solve_named("none/" + num(m_tot), m_tot, Models{});
        slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        const GrowthFit g = tax_growth(p);
        r.pass = r.pass && g.rate >= 0.0295 && g.rate <= 0.0305;
        r.detail += "M=" + num(m_tot) + " rate=" + num(g.rate) + " ci=[" + num(g.ci_low) + "," + num(g.ci_high) + "] ";
    }
    r.pass = r.pass && slowest < 5.0;
    r.detail += "slowest solve " + num(slowest) + " s (limits [0.0295,0.0305], 5 s)";
    return r;
}

CriterionResult sigma_law() {
    CriterionResult r;
    r.pass = true;
    const double expected = 0.03 / 1.6;
    for (double m_tot : {1000.0, 3000.0, 5000.0}) {
        const GrowthFit g = sigma_growth(solve_named("none/" + num(m_tot), m_tot, Models{}));
        r.pass = r.pass && std::abs(g.rate - expected) < 1e-4;
        r.detail += "M=" + num(m_tot) + " rate=" + num(g.rate) + " ";
    }
    r.detail += "(expected " + num(expected) + " +/- 1e-4)";
    return r;
}

CriterionResult oracle_equivalence() {
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_sigma = 0.0;
    double worst_cost = 0.0;
    double worst_tax = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        analytic::Scenario s;
        s.interest = GrowthSchedule::constant(0.005 + 0.055 * u(rng));
        s.growth = u(rng) < 0.5 ? GrowthSchedule::constant(0.005 + 0.035 * u(rng))
                                : GrowthSchedule::exponential_decay(0.01 + 0.04 * u(rng), 20.0 + 40.0 * u(rng));
        s.curve.c2 = 1.2 + 1.8 * u(rng);
        s.econ.horizon = 60.0 + 60.0 * u(rng);
        s.start_year = 30.0 * u(rng);
        s.m_tot = 500.0 + 4500.0 * u(rng);
        Models m;
        m.econ = s.econ;
        m.growth = s.growth;
        m.interest = s.interest;
        m.curve = s.curve;
        const Pathway p = solve_bvp(s.m_tot, s.start_year, m, SolverConfig{});
        worst_sigma = std::max(worst_sigma, rel_err(p.sigma_start(), analytic::sigma_start(s)));
        worst_cost = std::max(worst_cost, rel_err(p.discounted_total, analytic::total_cost(s)));
        worst_tax = std::max(worst_tax, rel_err(p.tax_start(), analytic::initial_tax(s)));
    }
    CriterionResult r;
    r.pass = worst_sigma < 1e-4 && worst_cost < 1e-4 && worst_tax < 1e-4;
    r.detail = "20 scenarios, max rel err sigma(N)=" + num(worst_sigma) + " C_total=" + num(worst_cost) +
               " P(N)=" + num(worst_tax) + " (limit 1e-4)";
    return r;
}

CriterionResult zero_interest() {
    Models m = learning_models(AdditiveLearning{});
    m.interest = GrowthSchedule::constant(0.0);
    m.growth = GrowthSchedule::constant(0.0);
    const double m_tot = 3000.0;
    const Pathway& p = solve_named("additive/i0r0", m_tot, m);
    const double level = m_tot / m.econ.horizon;
    double worst = 0.0;
    for (std::size_t k = p.start_index; k < p.size(); ++k) worst = std::max(worst, std::abs(p.m_dot[k] - level) / level);
    CriterionResult r;
    r.pass = worst < 1e-3;
    r.detail = "max |m_dot - M_tot/T| / (M_tot/T) = " + num(worst) + " (limit 1e-3)";
    return r;
}

CriterionResult learning_orderings() {
    const double m_tot = 3000.0;
    const double v_none = solve_named("none/3000", m_tot, Models{}).m_dot_start();
    const Pathway& add = solve_named("additive/3000", m_tot, learning_models(AdditiveLearning{}));
    const Pathway& ex = solve_named("exponential/3000", m_tot, learning_models(ExponentialLearning{}));
    const Pathway& pw = solve_named("power-law/3000", m_tot, learning_models(PowerLawLearning{}));
    const Pathway& dp = solve_named("damage-power/3000", m_tot, damage_models(reference_damage(DamageKind::power_law)));
    const Pathway& dl = solve_named("damage-logistic/3000", m_tot, damage_models(reference_damage(DamageKind::logistic)));
    CriterionResult r;
    r.pass = add.m_dot_start() > v_none && v_none > ex.m_dot_start() && v_none > pw.m_dot_start();
    r.detail = "m_dot(N): additive=" + num(add.m_dot_start()) + " none=" + num(v_none) +
               " exponential=" + num(ex.m_dot_start()) + " power-law=" + num(pw.m_dot_start()) + "; tax growth:";
    const std::pair<const char*, const Pathway*> active[] = {
        {"additive", &add}, {"exponential", &ex}, {"power-law", &pw}, {"damage-power", &dp}, {"damage-logistic", &dl}};
    for (const auto& [name, path] : active) {
        const double g = tax_growth(*path).rate;
        r.pass = r.pass && g < 0.03;
        r.detail += std::string(" ") + name + "=" + num(g);
    }
    r.detail += " (each < i = 0.03)";
    return r;
}

CriterionResult damage_calibration() {
    const DamageModel pl = reference_damage(DamageKind::power_law);
    const auto& shape = std::get<PowerLawDamage>(pl.shape);
    const DamageModel lg = reference_damage(DamageKind::logistic);
    const double r1 = std::abs(damage_fraction(lg, 2.5 / lg.alpha) - 0.05);
    const double r2 = std::abs(damage_fraction(lg, 5.0 / lg.alpha) - 0.20);
    const bool exact = std::abs(shape.d1 - 2.0) < 1e-12 && std::abs(shape.d0 - 0.8) < 1e-12;

    const double m_tot = 3000.0;
    const Pathway& off = solve_named("none/3000", m_tot, Models{});
    const Pathway& on = solve_named("damage-power/3000", m_tot, damage_models(pl));
    const double g_off = tax_growth(off).rate;
    const double g_on = tax_growth(on).rate;
    CriterionResult r;
    r.pass = exact && r1 < 1e-10 && r2 < 1e-10 && on.m_dot_start() > off.m_dot_start() && g_on < g_off;
    r.detail = "power-law d0=" + num(shape.d0) + " d1=" + num(shape.d1) + "; logistic residuals " + num(r1) + ", " +
               num(r2) + "; m_dot(N) on/off " + num(on.m_dot_start()) + "/" + num(off.m_dot_start()) +
               "; tax growth on/off " + num(g_on) + "/" + num(g_off);
    return r;
}

CriterionResult delay_economics() {
    analytic::Scenario s;
    s.growth = GrowthSchedule::constant(0.04);
    s.interest = GrowthSchedule::constant(0.03);
    double worst_fd = 0.0;
    double worst_identity = 0.0;
    const double h = 1e-4;
    for (double n : {0.0, 20.0, 40.0, 60.0}) {
        s.start_year = n;
        analytic::Scenario up = s;
        analytic::Scenario down = s;
        up.start_year = n + h;
        down.start_year = std::max(0.0, n - h);
        const double fd = (std::log(analytic::total_cost(up)) - std::log(analytic::total_cost(down))) /
                          (up.start_year - down.start_year);
        // At N = 0 the one-sided difference is only first order; take a
        // second-order one-sided stencil instead.
        double deriv = fd;
        if (n == 0.0) {
            analytic::Scenario up2 = s;
            up2.start_year = 2.0 * h;
            deriv = (-3.0 * std::log(analytic::total_cost(s)) + 4.0 * std::log(analytic::total_cost(up)) -
                     std::log(analytic::total_cost(up2))) /
                    (2.0 * h);
        }
        worst_fd = std::max(worst_fd, rel_err(analytic::delay_cost_growth_constant(s), deriv));
        worst_identity = std::max(
            worst_identity,
            std::abs(analytic::initial_tax_delay_growth(s) - analytic::delay_cost_growth(s) - s.interest.rate(n)));
    }
    CriterionResult r;
    r.pass = worst_fd < 1e-6 && worst_identity < 1e-12;
    r.detail = "N in {0,20,40,60}: max rel err vs d ln C/dN = " + num(worst_fd) + " (limit 1e-6); |tax delay growth - cost delay growth - i| = " +
               num(worst_identity) + " (limit 1e-12)";
    return r;
}

CriterionResult overshoot() {
    analytic::Scenario s;
    s.growth = GrowthSchedule::constant(0.04);
    s.interest = GrowthSchedule::constant(0.03);
    std::vector<double> values;
    bool derivatives_positive = true;
    for (int n = 0; n <= 40; ++n) {
        s.start_year = n;
        values.push_back(analytic::overshoot_threshold_constant(s, kDefaultTcre));
        const auto th = analytic::overshoot_threshold(s, kDefaultTcre);
        derivatives_positive = derivatives_positive && th.d_threshold_dN > 0.0 && th.d2_threshold_dN2 > 0.0;
    }
    bool monotone = true;
    bool convex = true;
    for (std::size_t k = 1; k < values.size(); ++k) monotone = monotone && values[k] > values[k - 1];
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        convex = convex && values[k + 1] - 2.0 * values[k] + values[k - 1] > 0.0;
    }
    analytic::Scenario longrun = s;
    longrun.start_year = 0.0;
    longrun.econ.horizon = 300.0;
    const double fraction = analytic::overshoot_threshold(longrun, kDefaultTcre).abated_fraction;
    const double tr = longrun.econ.theta * 0.04;
    const double limit = tr / (0.03 / longrun.curve.c2 + tr);
    CriterionResult r;
    r.pass = monotone && convex && derivatives_positive && rel_err(fraction, limit) < 0.02;
    r.detail = std::string("N in [0,40]: monotone=") + (monotone ? "yes" : "no") + " convex=" + (convex ? "yes" : "no") +
               " dT*/dN,d2T*/dN2>0=" + (derivatives_positive ? "yes" : "no") + "; T=300 abated fraction " + num(fraction) +
               " vs " + num(limit) + " (rel err " + num(rel_err(fraction, limit)) + ", limit 0.02)";
    return r;
}

CriterionResult optimality() {
    CriterionResult r;
    r.pass = true;
    double worst_ratio = -1e300;
    for (const auto& s : registry()) {
        const auto rep = perturbation_check(s.path, s.models, 100, 0.005 * s.path.m_tot, 0);
        r.pass = r.pass && rep.optimal();
        worst_ratio = std::max(worst_ratio, -rep.min_delta / s.path.discounted_total);
    }
    r.detail = num(static_cast<double>(registry().size())) + " pathways x 100 perturbations; worst -min_delta/C_total = " +
               num(worst_ratio) + " (limit 1e-7)";
    return r;
}

bool same_files(const std::filesystem::path& a, const std::filesystem::path& b) {
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
        std::ifstream fa(entry.path(), std::ios::binary);
        std::ifstream fb(b / entry.path().filename(), std::ios::binary);
        if (!fb) return false;
        std::stringstream sa;
        std::stringstream sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str()) return false;
    }
    return true;
}

CriterionResult hygiene() {
    double worst_el = 0.0;
    for (const auto& s : registry()) worst_el = std::max(worst_el, euler_lagrange_residual(s.path, s.models));

    // RK4 order at a fixed start rate, against a fine reference.
    const Models m;
    const Pathway& base = solve_named("none/3000", 3000.0, m);
    SolverConfig coarse;
    coarse.dt = 0.4;
    SolverConfig fine = coarse;
    fine.dt = 0.2;
    SolverConfig ref = coarse;
    ref.dt = 0.4 / 64.0;
    const double v = base.m_dot_start();
    const double m_ref = integrate_trajectory(v, 0.0, m, ref).m.back();
    const double e1 = std::abs(integrate_trajectory(v, 0.0, m, coarse).m.back() - m_ref);
    const double e2 = std::abs(integrate_trajectory(v, 0.0, m, fine).m.back() - m_ref);
    const double ratio = e1 / e2;

    // Halving the default dt moves M(T) by less than shoot_tol / 10.
    const SolverConfig def;
    SolverConfig half = def;
    half.dt = def.dt / 2.0;
    const double shift = std::abs(integrate_trajectory(v, 0.0, m, def).m.back() -
                                  integrate_trajectory(v, 0.0, m, half).m.back());

    ScenarioConfig cfg;
    cfg.variants = {Variant{"none", NoLearning{}, {}}, Variant{"additive", AdditiveLearning{}, {}}};
    cfg.m_tots = {0.0, 3000.0};
    cfg.perturbation.trials = 10;
    const auto root = std::filesystem::temp_directory_path() / ("abatement_verify_" + std::to_string(::getpid()));
    run_scenario(cfg, {(root / "a").string(), 1});
    run_scenario(cfg, {(root / "b").string(), 4});
    const bool identical = same_files(root / "a", root / "b") && same_files(root / "b", root / "a");
    std::filesystem::remove_all(root);

    CriterionResult r;
    r.pass = worst_el < 1e-4 && ratio >= 8.0 && ratio <= 32.0 && shift < def.shoot_tol / 10.0 && identical;
    r.detail = "max EL residual " + num(worst_el) + " (limit 1e-4); RK4 error ratio " + num(ratio) +
               " (limits [8,32]); dt-halving shift " + num(shift) + " Gton (limit " + num(def.shoot_tol / 10.0) +
               "); repeated run CSVs " + (identical ? "identical" : "differ");
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
    registry().clear();
    std::vector<CriterionResult> out;
    out.push_back(guarded(1, "Hotelling tax growth", hotelling));
    out.push_back(guarded(2, "sigma growth law", sigma_law));
    out.push_back(guarded(3, "oracle equivalence", oracle_equivalence));
    out.push_back(guarded(4, "zero-interest additive learning", zero_interest));
    out.push_back(guarded(5, "learning-direction orderings", learning_orderings));
    out.push_back(guarded(6, "damage calibration", damage_calibration));
    out.push_back(guarded(7, "delay economics", delay_economics));
    out.push_back(guarded(8, "overshoot threshold", overshoot));
    out.push_back(guarded(9, "perturbation optimality", optimality));
    out.push_back(guarded(10, "numerical hygiene", hygiene));
    return out;
}

std::string format_result(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "%s  %2d  ", r.pass ? "PASS" : "FAIL", r.id);
    return head + r.name + ": " + r.detail;
}

}  // namespace abatement
