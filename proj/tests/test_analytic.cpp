#include <cmath>

#include "abatement/analytic.hpp"
#include "abatement/errors.hpp"
#include "doctest.h"

using namespace abatement;
using namespace abatement::analytic;

namespace {

Scenario constant_rates(double i = 0.03, double r = 0.04) {
    Scenario s;
    s.interest = GrowthSchedule::constant(i);
    s.growth = GrowthSchedule::constant(r);
    return s;
}

double future_bau(const Scenario& s) { return bau_cumulative(s.econ, s.growth, s.econ.horizon); }

}  // namespace

TEST_CASE("zero rates give a constant abatement share") {
    Scenario s = constant_rates(0.0, 0.0);
    CHECK(sigma_start(s) == doctest::Approx(3000.0 / (40.0 * 80.0)).epsilon(1e-12));
    CHECK(sigma_end(s) == doctest::Approx(sigma_start(s)).epsilon(1e-12));
}

TEST_CASE("quadrature and closed forms agree for constant rates") {
    for (double n : {0.0, 17.0, 55.0}) {
        Scenario s = constant_rates();
        s.start_year = n;
        CHECK(growth_integral(s, n, 80.0) == doctest::Approx(growth_integral_constant(s, n, 80.0)).epsilon(1e-10));
        CHECK(delay_cost_growth(s) == doctest::Approx(delay_cost_growth_constant(s)).epsilon(1e-10));
        CHECK(overshoot_threshold(s, kDefaultTcre).threshold ==
              doctest::Approx(overshoot_threshold_constant(s, kDefaultTcre)).epsilon(1e-10));
    }
}

TEST_CASE("sigma and cost grow with delay") {
    Scenario s;
    double last_sigma = 0.0;
    double last_cost = 0.0;
    for (double n = 0.0; n < 60.0; n += 5.0) {
        s.start_year = n;
        CHECK(sigma_start(s) > last_sigma);
        CHECK(total_cost(s) > last_cost);
        last_sigma = sigma_start(s);
        last_cost = total_cost(s);
    }
}

TEST_CASE("total cost is homogeneous of degree c2+1 in the budget") {
    Scenario s;
    const double c = total_cost(s);
    s.m_tot *= 2.0;
    CHECK(total_cost(s) == doctest::Approx(c * std::pow(2.0, 2.6)).epsilon(1e-12));
}

TEST_CASE("delay cost growth approaches c2/(T-N) late") {
    // The relative gap to the limit is about g (T - N) / 2, which is 2.4% at
    // T - N = 1 for these rates, so the 1% band is checked closer in.
    Scenario s = constant_rates();
    const double g = 0.03 / 1.6 + 0.75 * 0.04;
    s.start_year = 79.75;
    CHECK(delay_cost_growth_constant(s) == doctest::Approx(1.6 / 0.25).epsilon(0.01));
    for (double gap : {1.0, 0.1, 0.01}) {
        s.start_year = 80.0 - gap;
        const double rel = 1.0 - delay_cost_growth_constant(s) * gap / 1.6;
        CHECK(rel == doctest::Approx(g * gap / 2.0).epsilon(0.02));
    }
}

TEST_CASE("delay cost growth approaches c2 g exp(-gT) for long horizons") {
    Scenario s = constant_rates();
    s.econ.horizon = 200.0;
    const double g = 0.03 / 1.6 + 0.75 * 0.04;
    CHECK(delay_cost_growth_constant(s) == doctest::Approx(1.6 * g / std::exp(g * 200.0)).epsilon(0.01));
}

TEST_CASE("delay cost growth is the log-derivative of total cost") {
    Scenario s;
    const double h = 1e-4;
    for (double n : {5.0, 30.0, 70.0}) {
        s.start_year = n + h;
        const double up = std::log(total_cost(s));
        s.start_year = n - h;
        const double down = std::log(total_cost(s));
        s.start_year = n;
        CHECK(delay_cost_growth(s) == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("initial tax grows with delay at i plus the delay cost growth") {
    Scenario s;
    const double h = 1e-4;
    for (double n : {5.0, 40.0}) {
        s.start_year = n + h;
        const double up = std::log(initial_tax(s));
        s.start_year = n - h;
        const double down = std::log(initial_tax(s));
        s.start_year = n;
        CHECK(initial_tax_delay_growth(s) == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
        CHECK(std::abs(initial_tax_delay_growth(s) - delay_cost_growth(s) - 0.03) < 1e-12);
    }
}

TEST_CASE("initial tax formula") {
    Scenario s = constant_rates();
    s.start_year = 10.0;
    const double g = 0.03 / 1.6 + 0.75 * 0.04;
    const double j = std::exp(g * 10.0) * std::expm1(g * 70.0) / g;
    const double expected = 1000.0 * s.curve.c1 * 2.6 * std::pow(3000.0 / 40.0, 1.6) * std::exp(0.3) / std::pow(j, 1.6);
    CHECK(initial_tax(s) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("goal-based initial tax falls with the interest rate") {
    double last = 1e300;
    for (double i : {0.01, 0.02, 0.03, 0.05}) {
        Scenario s = constant_rates(i, 0.02);
        const double tax = initial_tax_from_goal(s, 2.0, 1.0, kDefaultTcre);
        CHECK(tax < last);
        last = tax;
    }
    Scenario s;
    s.m_tot = abatement_for_goal(s, 2.0, 1.0, kDefaultTcre);
    CHECK(initial_tax_from_goal(s, 2.0, 1.0, kDefaultTcre) == doctest::Approx(initial_tax(s)).epsilon(1e-14));
    CHECK(abatement_for_goal(s, 2.0, 1.0, kDefaultTcre) ==
          doctest::Approx(future_bau(s) - 1.0 / kDefaultTcre).epsilon(1e-12));
    CHECK_THROWS_AS(initial_tax_from_goal(s, 100.0, 1.0, kDefaultTcre), DomainError);
}

TEST_CASE("overshoot threshold rises and accelerates with delay") {
    Scenario s = constant_rates();
    for (double n : {0.0, 10.0, 40.0}) {
        s.start_year = n;
        const auto th = overshoot_threshold(s, kDefaultTcre);
        CHECK(th.d_threshold_dN > 0.0);
        CHECK(th.d2_threshold_dN2 > 0.0);
        const double h = 1e-3;
        s.start_year = n + h;
        const double up = overshoot_threshold(s, kDefaultTcre).threshold;
        s.start_year = n + 2 * h;
        const double up2 = overshoot_threshold(s, kDefaultTcre).threshold;
        const double fd = (-3.0 * th.threshold + 4.0 * up - up2) / (2 * h);
        CHECK(th.d_threshold_dN == doctest::Approx(fd).epsilon(1e-5));
        s.start_year = n;
    }
}

TEST_CASE("sigma at the horizon stays below one exactly above the threshold") {
    for (double n : {0.0, 20.0}) {
        Scenario s = constant_rates();
        s.start_year = n;
        const double th = overshoot_threshold(s, kDefaultTcre).threshold;
        for (double factor : {0.99, 1.01}) {
            s.m_tot = future_bau(s) - factor * th / kDefaultTcre;
            CHECK((sigma_end(s) < 1.0) == (factor > 1.0));
        }
    }
}

TEST_CASE("long-horizon abated fraction") {
    Scenario s = constant_rates();
    s.econ.horizon = 300.0;
    const double tr = 0.75 * 0.04;
    CHECK(overshoot_threshold(s, kDefaultTcre).abated_fraction == doctest::Approx(tr / (0.03 / 1.6 + tr)).epsilon(0.02));

    Scenario zero = constant_rates(0.0, 0.04);
    zero.econ.horizon = 300.0;
    CHECK(overshoot_threshold(zero, kDefaultTcre).abated_fraction == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(overshoot_threshold(zero, kDefaultTcre).threshold) < 1e-9 * future_bau(zero) * kDefaultTcre);
}

TEST_CASE("scenario validation") {
    Scenario s;
    s.curve.c0 = 0.1;
    CHECK_THROWS_AS(sigma_start(s), DomainError);
    s = Scenario{};
    s.start_year = 80.0;
    CHECK_THROWS_AS(total_cost(s), DomainError);
}
