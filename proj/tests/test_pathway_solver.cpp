#include <cmath>
#include <vector>

#include "abatement/analytic.hpp"
#include "abatement/errors.hpp"
#include "abatement/numerics.hpp"
#include "abatement/pathway.hpp"
#include "abatement/scenario.hpp"
#include "doctest.h"

using namespace abatement;

namespace {

Models with_learning(LearningModel l) {
    Models m;
    m.learning = l;
    return m;
}

Models with_damage() {
    Models m;
    m.damage.shape = PowerLawDamage{};
    return m;
}

}  // namespace

TEST_CASE("solver grid places a node at the start year") {
    std::size_t idx = 0;
    const auto g = solver_grid(13.37, 80.0, 0.05, &idx);
    CHECK(g[idx] == 13.37);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 80.0);
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] - g[k - 1] <= 0.05 + 1e-12);
    CHECK(solver_grid(0.0, 80.0, 0.05, &idx).size() == 1601);
    CHECK(idx == 0);
}

TEST_CASE("Euler-Lagrange acceleration is singular at zero rate") {
    CHECK_THROWS_AS(el_acceleration({10.0, 100.0, 0.0}, Models{}), DomainError);
}

TEST_CASE("no-learning solve grows sigma at i/c2 and the tax at i") {
    const Pathway p = solve_bvp(3000.0, 0.0, Models{}, SolverConfig{});
    CHECK(std::abs(p.m.back() - 3000.0) < SolverConfig{}.shoot_tol);
    CHECK(sigma_growth(p).rate == doctest::Approx(0.03 / 1.6).epsilon(1e-6));
    const GrowthFit g = tax_growth(p);
    CHECK(g.rate >= 0.0295);
    CHECK(g.rate <= 0.0305);
}

TEST_CASE("zero interest and zero growth with additive learning gives a constant rate") {
    Models m = with_learning(AdditiveLearning{});
    m.interest = GrowthSchedule::constant(0.0);
    m.growth = GrowthSchedule::constant(0.0);
    const Pathway p = solve_bvp(2400.0, 0.0, m, SolverConfig{});
    for (double v : p.m_dot) CHECK(std::abs(v - 30.0) < 0.03);
}

TEST_CASE("learning shifts abatement earlier or later") {
    const double none = solve_bvp(3000.0, 0.0, Models{}, {}).m_dot_start();
    CHECK(solve_bvp(3000.0, 0.0, with_learning(AdditiveLearning{}), {}).m_dot_start() > none);
    CHECK(solve_bvp(3000.0, 0.0, with_learning(ExponentialLearning{}), {}).m_dot_start() < none);
    CHECK(solve_bvp(3000.0, 0.0, with_learning(PowerLawLearning{}), {}).m_dot_start() < none);
}

TEST_CASE("damages bring abatement forward and slow the tax") {
    const Pathway off = solve_bvp(3000.0, 0.0, Models{}, {});
    const Pathway on = solve_bvp(3000.0, 0.0, with_damage(), {});
    CHECK(on.m_dot_start() > off.m_dot_start());
    CHECK(tax_growth(on).rate < tax_growth(off).rate);
    CHECK(on.discounted_damage > 0.0);
}

TEST_CASE("solved pathways keep their bookkeeping") {
    const Models variants[] = {Models{}, with_learning(AdditiveLearning{}), with_learning(ExponentialLearning{}),
                               with_learning(PowerLawLearning{}), with_damage()};
    for (const auto& m : variants) {
        const Pathway p = solve_bvp(3000.0, 5.0, m, {});
        const double bau = bau_cumulative(m.econ, m.growth, m.econ.horizon) + m.econ.e_hist;
        CHECK(p.cum_emissions.back() == doctest::Approx(bau - 3000.0).epsilon(1e-6));
        CHECK(abatement_quadrature_mismatch(p) < 1e-8);
        CHECK(euler_lagrange_residual(p, m) < 1e-4);
        const TaxPath tax = carbon_tax_path(p, m);
        CHECK(tax.max_slope_mismatch < 1e-3);
        CHECK(tax.max_integrated_mismatch < 1e-3);
        for (std::size_t k = 1; k < p.size(); ++k) CHECK(p.m[k] >= p.m[k - 1]);
        for (std::size_t k = 0; k < p.start_index; ++k) CHECK(p.tax[k] == 0.0);
    }
}

TEST_CASE("a larger budget raises the tax everywhere") {
    const Pathway a = solve_bvp(2000.0, 0.0, Models{}, {});
    const Pathway b = solve_bvp(3000.0, 0.0, Models{}, {});
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(b.tax[k] > a.tax[k]);
}

TEST_CASE("zero pathway has zero cost without damages") {
    const Pathway p = zero_pathway(0.0, Models{}, {});
    CHECK(p.discounted_total == 0.0);
    for (double v : p.m) CHECK(v == 0.0);
    CHECK(zero_pathway(0.0, with_damage(), {}).discounted_damage > 0.0);
}

TEST_CASE("at zero interest the discounted cost is the plain sum") {
    Models m;
    m.interest = GrowthSchedule::constant(0.0);
    const Pathway p = solve_bvp(3000.0, 0.0, m, {});
    std::vector<double> cost;
    for (std::size_t k = 0; k < p.size(); ++k) {
        cost.push_back(p.m_dot[k] * average_cost(m.curve, m.learning, p.m_dot[k], p.bau_rate[k], p.m[k]));
    }
    CHECK(discounted_cost(p, m).total == doctest::Approx(numerics::trapezoid(p.years, cost)).epsilon(1e-12));
}

TEST_CASE("solver matches the closed forms with delayed start and decaying growth") {
    analytic::Scenario s;
    s.start_year = 12.5;
    s.m_tot = 2500.0;
    Models m;
    const Pathway p = solve_bvp(s.m_tot, s.start_year, m, {});
    CHECK(p.sigma_start() == doctest::Approx(analytic::sigma_start(s)).epsilon(1e-6));
    CHECK(p.discounted_total == doctest::Approx(analytic::total_cost(s)).epsilon(1e-6));
    CHECK(p.tax_start() == doctest::Approx(analytic::initial_tax(s)).epsilon(1e-6));
    CHECK(p.sigma.back() == doctest::Approx(analytic::sigma_end(s)).epsilon(1e-6));
}

TEST_CASE("RK4 error falls sixteenfold per halving") {
    const Models m;
    const double v = solve_bvp(3000.0, 0.0, m, {}).m_dot_start();
    auto terminal = [&](double dt) {
        SolverConfig c;
        c.dt = dt;
        return integrate_trajectory(v, 0.0, m, c).m.back();
    };
    const double ref = terminal(0.005);
    const double ratio = std::abs(terminal(0.4) - ref) / std::abs(terminal(0.2) - ref);
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
    CHECK(std::abs(terminal(0.05) - terminal(0.025)) < 1e-4);
}

TEST_CASE("perturbations never beat a solved pathway") {
    const Models variants[] = {Models{}, with_learning(AdditiveLearning{}), with_damage()};
    for (const auto& m : variants) {
        const Pathway p = solve_bvp(3000.0, 0.0, m, {});
        const auto rep = perturbation_check(p, m, 100, 15.0, 7);
        CHECK(rep.trials == 100);
        CHECK(rep.optimal());
        CHECK(rep.mean_delta > 0.0);
    }
    const Pathway p = solve_bvp(3000.0, 0.0, Models{}, {});
    const auto flat = perturbation_check(p, Models{}, 20, 0.0, 1);
    CHECK(flat.min_delta == 0.0);
    CHECK(flat.max_delta == 0.0);
}

TEST_CASE("constant-rate path beats perturbations at zero interest with additive learning") {
    Models m = with_learning(AdditiveLearning{});
    m.interest = GrowthSchedule::constant(0.0);
    m.growth = GrowthSchedule::constant(0.0);
    const Pathway p = solve_bvp(2400.0, 0.0, m, {});
    CHECK(perturbation_check(p, m, 100, 20.0, 3).optimal());
}

TEST_CASE("solver errors") {
    CHECK_THROWS_AS(solve_bvp(0.0, 0.0, Models{}, {}), DomainError);
    CHECK_THROWS_AS(solve_bvp(3000.0, 80.0, Models{}, {}), DomainError);
    CHECK_THROWS_AS(solve_bvp(0.5, 0.0, with_learning(PowerLawLearning{}), {}), DomainError);
    SolverConfig tight;
    tight.bracket_low = 0.1;
    tight.bracket_high = 0.2;
    tight.max_iters = 2;
    CHECK_THROWS_AS(solve_bvp(3000.0, 0.0, Models{}, tight), InfeasibleError);
    SolverConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(solve_bvp(3000.0, 0.0, Models{}, bad), DomainError);
    CHECK_THROWS_AS(integrate_trajectory(-1.0, 0.0, Models{}, {}), TrajectoryError);
}

TEST_CASE("targets that need the rate to reach zero are reported, not solved") {
    Models m;
    m.damage.shape = PowerLawDamage{1.6, 2.0, 10.0};
    try {
        solve_bvp(3000.0, 0.0, m, {});
        FAIL("expected a solver error");
    } catch (const SolverError& e) {
        CHECK(std::string(e.what()).find("reaches zero before T") != std::string::npos);
    }
}
