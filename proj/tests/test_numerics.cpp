#include <cmath>
#include <numbers>
#include <vector>

#include "abatement/numerics.hpp"
#include "doctest.h"

using namespace abatement::numerics;

TEST_CASE("adaptive Simpson reproduces elementary integrals") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(0.3 * x); }, 0.0, 10.0) ==
          doctest::Approx((std::exp(3.0) - 1.0) / 0.3).epsilon(1e-11));
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("trapezoid is exact for linear data and corrected trapezoid for cubics") {
    std::vector<double> x;
    std::vector<double> lin;
    std::vector<double> cubic;
    std::vector<double> dcubic;
    for (int k = 0; k <= 10; ++k) {
        const double t = 0.3 * k;
        x.push_back(t);
        lin.push_back(2.0 * t + 1.0);
        cubic.push_back(t * t * t);
        dcubic.push_back(3.0 * t * t);
    }
    const double b = 3.0;
    CHECK(trapezoid(x, lin) == doctest::Approx(b * b + b).epsilon(1e-14));
    CHECK(corrected_trapezoid(x, cubic, dcubic) == doctest::Approx(b * b * b * b / 4.0).epsilon(1e-13));
    CHECK(std::abs(trapezoid(x, cubic) - b * b * b * b / 4.0) > 1e-3);
}

TEST_CASE("least squares recovers an exact line with zero standard error") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double t : x) y.push_back(0.5 - 1.25 * t);
    const LinearFit fit = least_squares(x, y);
    CHECK(fit.slope == doctest::Approx(-1.25).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fit.slope_stderr < 1e-14);
}

TEST_CASE("least squares standard error matches the textbook formula") {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{0.0, 1.1, 1.9, 3.2};
    const LinearFit fit = least_squares(x, y);
    // sxx = 5, residuals from slope 1.04, intercept -0.01
    CHECK(fit.slope == doctest::Approx(1.04));
    CHECK(fit.intercept == doctest::Approx(-0.01));
    const double r[] = {0.01, 0.07, -0.17, 0.09};
    double ssr = 0.0;
    for (double e : r) ssr += e * e;
    CHECK(fit.slope_stderr == doctest::Approx(std::sqrt(ssr / 2.0 / 5.0)));
}
