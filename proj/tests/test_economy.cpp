#include <cmath>

#include "abatement/economy.hpp"
#include "abatement/errors.hpp"
#include "doctest.h"

using namespace abatement;

namespace {

// Composite Simpson on a fine uniform grid, independent of the library quadrature.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("growth schedules integrate exactly") {
    const auto c = GrowthSchedule::constant(0.03);
    CHECK(c.rate(17.0) == 0.03);
    CHECK(c.integral(10.0) == doctest::Approx(0.3));
    CHECK(std::isinf(c.integral_limit()));

    const auto d = GrowthSchedule::exponential_decay(0.04, 40.0);
    CHECK(d.rate(40.0) == doctest::Approx(0.04 / std::exp(1.0)));
    CHECK(d.integral(80.0) == doctest::Approx(simpson([&](double t) { return d.rate(t); }, 0.0, 80.0)).epsilon(1e-12));
    CHECK(d.integral_limit() == doctest::Approx(1.6));
    CHECK(d.integral(1e-9) > 0.0);

    CHECK(GrowthSchedule::constant(0.0).integral_limit() == 0.0);
}

TEST_CASE("integrated rate rejects negative time") {
    CHECK_THROWS_AS(integrated_rate(GrowthSchedule::constant(0.03), -1.0), DomainError);
    CHECK(integrated_rate(GrowthSchedule::constant(0.03), 0.0) == 0.0);
}

TEST_CASE("schedule validation") {
    CHECK_THROWS_AS(GrowthSchedule::exponential_decay(0.04, 0.0).validate(), DomainError);
    CHECK_NOTHROW(GrowthSchedule::constant(0.0).validate());
}

TEST_CASE("BAU emissions follow the GDP elasticity") {
    EconomyParams econ;
    const auto g = GrowthSchedule::constant(0.04);
    CHECK(bau_emission_rate(econ, g, 0.0) == doctest::Approx(40.0));
    CHECK(bau_emission_rate(econ, g, 25.0) == doctest::Approx(40.0 * std::exp(0.75 * 0.04 * 25.0)));
    CHECK(bau_growth_rate(econ, g, 25.0) == doctest::Approx(0.03));
    CHECK(gdp(econ, g, 10.0) == doctest::Approx(105.0 * std::exp(0.4)));
}

TEST_CASE("BAU cumulative emissions match closed forms and a fine Simpson oracle") {
    EconomyParams econ;
    const auto c = GrowthSchedule::constant(0.04);
    const double k = 0.75 * 0.04;
    CHECK(bau_cumulative(econ, c, 80.0) == doctest::Approx(40.0 * std::expm1(k * 80.0) / k).epsilon(1e-11));

    const auto d = GrowthSchedule::exponential_decay(0.04, 40.0);
    const double oracle = simpson([&](double t) { return 40.0 * std::exp(0.75 * d.integral(t)); }, 0.0, 80.0);
    CHECK(bau_cumulative(econ, d, 80.0) == doctest::Approx(oracle).epsilon(1e-11));
    CHECK(bau_cumulative(econ, d, 80.0, true) == doctest::Approx(oracle + econ.e_hist).epsilon(1e-11));
    CHECK(bau_shape_integral(econ, d, 10.0, 50.0) ==
          doctest::Approx(simpson([&](double t) { return std::exp(0.75 * d.integral(t)); }, 10.0, 50.0)).epsilon(1e-11));
    CHECK(bau_shape_integral(econ, c, 10.0, 50.0) ==
          doctest::Approx((std::exp(k * 50.0) - std::exp(k * 10.0)) / k).epsilon(1e-12));
}

TEST_CASE("history reproduces present warming") {
    CHECK(history_for_warming(1.0, kDefaultTcre) * kDefaultTcre == doctest::Approx(1.0));
    CHECK(EconomyParams{}.e_hist == doctest::Approx(3664.0 / 1.65));
    CHECK(kDefaultTcre == doctest::Approx(1.65 / 3664.0));
}

TEST_CASE("economy validation") {
    EconomyParams econ;
    econ.horizon = 0.0;
    CHECK_THROWS_AS(econ.validate(), DomainError);
    econ = EconomyParams{};
    econ.e_bau0 = -1.0;
    CHECK_THROWS_AS(econ.validate(), DomainError);
}
