#include <cmath>

#include "abatement/cost_models.hpp"
#include "abatement/errors.hpp"
#include "doctest.h"

using namespace abatement;

TEST_CASE("marginal cost at full abatement is 550 dollars per ton") {
    const AbatementCostCurve curve;
    CHECK(marginal_cost(curve, NoLearning{}, 40.0, 40.0, 0.0) * 1000.0 == doctest::Approx(550.0).epsilon(1e-14));
    CHECK(average_cost(curve, NoLearning{}, 40.0, 40.0, 0.0) == doctest::Approx(0.55 / 2.6));
}

TEST_CASE("marginal cost is the rate derivative of total cost") {
    const AbatementCostCurve curve{0.01, 0.3, 1.8};
    const LearningModel models[] = {NoLearning{}, AdditiveLearning{}, ExponentialLearning{}, PowerLawLearning{}};
    for (const auto& l : models) {
        const double m = 150.0;
        const double v = 12.0;
        const double e = 1e-5;
        const double fd = ((v + e) * average_cost(curve, l, v + e, 45.0, m) - (v - e) * average_cost(curve, l, v - e, 45.0, m)) /
                          (2.0 * e);
        CHECK(marginal_cost(curve, l, v, 45.0, m) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("cost functions reject a nonpositive ceiling or negative rate") {
    const AbatementCostCurve curve;
    CHECK_THROWS_AS(marginal_cost(curve, NoLearning{}, 1.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(average_cost(curve, NoLearning{}, -1.0, 40.0, 0.0), DomainError);
}

TEST_CASE("learning functions satisfy their normalizations") {
    for (const LearningModel l : {LearningModel{NoLearning{}}, LearningModel{AdditiveLearning{}}, LearningModel{ExponentialLearning{}}}) {
        const auto t = learning_terms(l, 0.0);
        CHECK(t.f == 0.0);
        CHECK(t.h == 1.0);
    }
    const PowerLawLearning p;
    CHECK(learning_terms(p, p.m0).h == doctest::Approx(1.0));
    CHECK(learning_terms(p, 800.0).h / learning_terms(p, 400.0).h == doctest::Approx(std::pow(0.5, p.b)));
    CHECK(std::pow(0.5, 0.322) == doctest::Approx(0.8).epsilon(1e-3));
    CHECK_THROWS_AS(learning_terms(p, 0.5), DomainError);
    CHECK(initial_stock(p) == 1.0);
    CHECK(initial_stock(AdditiveLearning{}) == 0.0);
}

TEST_CASE("learning derivatives match finite differences") {
    for (const LearningModel l : {LearningModel{AdditiveLearning{}}, LearningModel{ExponentialLearning{}}, LearningModel{PowerLawLearning{}}}) {
        const double m = 300.0;
        const double e = 1e-4;
        const auto t = learning_terms(l, m);
        CHECK(t.df == doctest::Approx((learning_terms(l, m + e).f - learning_terms(l, m - e).f) / (2 * e)).epsilon(1e-7));
        CHECK(t.dh == doctest::Approx((learning_terms(l, m + e).h - learning_terms(l, m - e).h) / (2 * e)).epsilon(1e-7));
    }
}

TEST_CASE("learning validation") {
    CHECK_THROWS_AS(validate(AdditiveLearning{0.0}), DomainError);
    CHECK_THROWS_AS(validate(ExponentialLearning{-1.0}), DomainError);
    CHECK_THROWS_AS(validate(PowerLawLearning{0.3, 0.0}), DomainError);
}

TEST_CASE("power-law damage at 2.5 K is five percent") {
    DamageModel d;
    d.shape = PowerLawDamage{};
    CHECK(damage_fraction(d, 2.5 / d.alpha) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(warming(d, 1000.0) == doctest::Approx(1000.0 * d.alpha));
    CHECK(damage_fraction(DamageModel{}, 5000.0) == 0.0);
}

TEST_CASE("damage derivative with respect to abatement is negative and matches finite differences") {
    DamageModel pl;
    pl.shape = PowerLawDamage{};
    const DamageModel lg = calibrate_damage(DamageKind::logistic, {2.5, 0.05}, {5.0, 0.20}, kDefaultTcre);
    for (const auto& d : {pl, lg}) {
        const double e = 5000.0;
        const double h = 1e-2;
        // dE/dM = -1
        const double fd = -(damage_fraction(d, e + h) - damage_fraction(d, e - h)) / (2 * h);
        CHECK(damage_fraction_dM(d, e) < 0.0);
        CHECK(damage_fraction_dM(d, e) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("power-law damage with negative emissions and fractional exponent is a domain error") {
    DamageModel d;
    d.shape = PowerLawDamage{0.8, 2.5, 10.0};
    CHECK_THROWS_AS(damage_fraction(d, -100.0), DomainError);
}

TEST_CASE("power-law calibration is exact") {
    const DamageModel d = calibrate_damage(DamageKind::power_law, {2.5, 0.05}, {5.0, 0.20}, kDefaultTcre);
    const auto& p = std::get<PowerLawDamage>(d.shape);
    CHECK(p.d1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.d0 == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(p.t0 == 10.0);

    const auto q = std::get<PowerLawDamage>(calibrate_damage(DamageKind::power_law, {1.7, 0.013}, {3.4, 0.052}, kDefaultTcre).shape);
    CHECK(q.d1 == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("logistic calibration passes through both points") {
    const DamageModel d = calibrate_damage(DamageKind::logistic, {2.5, 0.05}, {5.0, 0.20}, kDefaultTcre);
    CHECK(std::abs(damage_fraction(d, 2.5 / d.alpha) - 0.05) < 1e-10);
    CHECK(std::abs(damage_fraction(d, 5.0 / d.alpha) - 0.20) < 1e-10);
}

TEST_CASE("jointly calibrated damage models stay close between 1.5 and 5 K") {
    const DamageModel pl = calibrate_damage(DamageKind::power_law, {2.5, 0.05}, {5.0, 0.20}, kDefaultTcre);
    const DamageModel lg = calibrate_damage(DamageKind::logistic, {2.5, 0.05}, {5.0, 0.20}, kDefaultTcre);
    for (double t = 1.5; t <= 5.0 + 1e-12; t += 0.05) {
        const double e = t / kDefaultTcre;
        CHECK(std::abs(damage_fraction(pl, e) - damage_fraction(lg, e)) < 0.02);
    }
}

TEST_CASE("infeasible calibrations are rejected") {
    CHECK_THROWS_AS(calibrate_damage(DamageKind::power_law, {2.5, 0.05}, {2.5, 0.20}, kDefaultTcre), CalibrationError);
    CHECK_THROWS_AS(calibrate_damage(DamageKind::logistic, {2.5, 0.20}, {5.0, 0.05}, kDefaultTcre), CalibrationError);
    CHECK_THROWS_AS(calibrate_damage(DamageKind::logistic, {2.5, 0.05}, {5.0, 1.5}, kDefaultTcre), CalibrationError);
    CHECK_THROWS_AS(calibrate_damage(DamageKind::power_law, {2.5, -0.05}, {5.0, 0.2}, kDefaultTcre), CalibrationError);
}
