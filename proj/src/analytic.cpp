#include "abatement/analytic.hpp"

#include <cmath>

#include "abatement/errors.hpp"
#include "abatement/numerics.hpp"

namespace abatement::analytic {

namespace {

bool constant_rates(const Scenario& s) {
    return s.growth.kind == GrowthSchedule::Kind::constant &&
           s.interest.kind == GrowthSchedule::Kind::constant;
}

// Combined growth exponent i/c2 + theta r for constant schedules.
double combined_rate(const Scenario& s) {
    return s.interest.base_rate / s.curve.c2 + s.econ.theta * s.growth.base_rate;
}

double exponent(const Scenario& s, double t) {
    return s.interest.integral(t) / s.curve.c2 + s.econ.theta * s.growth.integral(t);
}

}  // namespace

void Scenario::validate() const {
    econ.validate();
    growth.validate();
    interest.validate();
    curve.validate();
    if (curve.c0 != 0.0) throw DomainError("closed forms require a zero cost-curve intercept");
    if (!(start_year >= 0.0 && start_year < econ.horizon)) {
        throw DomainError("start year must lie in [0, T)");
    }
}

double growth_integral(const Scenario& s, double a, double b) {
    return numerics::integrate([&](double t) { return std::exp(exponent(s, t)); }, a, b, 1e-10);
}

double growth_integral_constant(const Scenario& s, double a, double b) {
    const double g = combined_rate(s);
    if (g == 0.0) return b - a;
    return std::exp(g * a) * std::expm1(g * (b - a)) / g;
}

double sigma_start(const Scenario& s) {
    s.validate();
    const double n = s.start_year;
    return s.m_tot / s.econ.e_bau0 * std::exp(s.interest.integral(n) / s.curve.c2) /
           growth_integral(s, n, s.econ.horizon);
}

double sigma_end(const Scenario& s) {
    s.validate();
    const double t = s.econ.horizon;
    return s.m_tot / s.econ.e_bau0 * std::exp(s.interest.integral(t) / s.curve.c2) /
           growth_integral(s, s.start_year, t);
}

double total_cost(const Scenario& s) {
    s.validate();
    const double c2 = s.curve.c2;
    const double j = growth_integral(s, s.start_year, s.econ.horizon);
    return s.curve.c1 * std::pow(s.m_tot / s.econ.e_bau0, c2 + 1.0) * s.econ.e_bau0 / std::pow(j, c2);
}

double delay_cost_growth(const Scenario& s) {
    s.validate();
    const double n = s.start_year;
    return s.curve.c2 * std::exp(exponent(s, n)) / growth_integral(s, n, s.econ.horizon);
}

double delay_cost_growth_constant(const Scenario& s) {
    s.validate();
    if (!constant_rates(s)) throw DomainError("closed form needs constant interest and growth");
    const double g = combined_rate(s);
    const double span = s.econ.horizon - s.start_year;
    if (g == 0.0) return s.curve.c2 / span;
    // c2 g e^{gN} / (e^{gT} - e^{gN}) = c2 g / expm1(g (T - N)).
    return s.curve.c2 * g / std::expm1(g * span);
}

double initial_tax(const Scenario& s) {
    s.validate();
    const double c2 = s.curve.c2;
    const double n = s.start_year;
    const double j = growth_integral(s, n, s.econ.horizon);
    const double beta = s.curve.c1 * (c2 + 1.0) * std::pow(s.m_tot / s.econ.e_bau0, c2) *
                        std::exp(s.interest.integral(n)) / std::pow(j, c2);
    return 1000.0 * beta;
}

double initial_tax_delay_growth(const Scenario& s) {
    return s.interest.rate(s.start_year) + delay_cost_growth(s);
}

double abatement_for_goal(const Scenario& s, double final_warming, double warming0, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("TCRE alpha must be positive");
    const double future_bau = s.econ.e_bau0 * bau_shape_integral(s.econ, s.growth, 0.0, s.econ.horizon);
    return future_bau - (final_warming - warming0) / alpha;
}

double initial_tax_from_goal(Scenario s, double final_warming, double warming0, double alpha) {
    s.m_tot = abatement_for_goal(s, final_warming, warming0, alpha);
    if (!(s.m_tot > 0.0)) {
        throw DomainError("warming goal is met without abatement; initial tax is zero");
    }
    return initial_tax(s);
}

OvershootThreshold overshoot_threshold(const Scenario& s, double alpha) {
    s.validate();
    if (!(alpha > 0.0)) throw DomainError("TCRE alpha must be positive");
    const double n = s.start_year;
    const double t = s.econ.horizon;
    const double c2 = s.curve.c2;
    const double bau_shape = bau_shape_integral(s.econ, s.growth, 0.0, t);
    const double abatable = std::exp(-s.interest.integral(t) / c2) * growth_integral(s, n, t);

    OvershootThreshold out;
    out.threshold = alpha * s.econ.e_bau0 * (bau_shape - abatable);
    out.d_threshold_dN = alpha * s.econ.e_bau0 *
                         std::exp(-(s.interest.integral(t) - s.interest.integral(n)) / c2 +
                                  s.econ.theta * s.growth.integral(n));
    out.d2_threshold_dN2 =
        (s.interest.rate(n) / c2 + s.econ.theta * s.growth.rate(n)) * out.d_threshold_dN;
    out.abated_fraction = abatable / bau_shape;
    return out;
}

double overshoot_threshold_constant(const Scenario& s, double alpha) {
    s.validate();
    if (!constant_rates(s)) throw DomainError("closed form needs constant interest and growth");
    const double t = s.econ.horizon;
    const double tr = s.econ.theta * s.growth.base_rate;
    const double g = combined_rate(s);
    const double bau = tr == 0.0 ? t : std::expm1(tr * t) / tr;
    const double abatable =
        g == 0.0 ? std::exp(tr * t) * (t - s.start_year) : std::exp(tr * t) * (-std::expm1(-g * (t - s.start_year))) / g;
    return alpha * s.econ.e_bau0 * (bau - abatable);
}

}  // namespace abatement::analytic
