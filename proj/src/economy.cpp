#include "abatement/economy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "abatement/errors.hpp"
#include "abatement/numerics.hpp"

namespace abatement {

namespace {

void require_time(double t) {
    if (!(t >= 0.0)) {
        throw DomainError("time must be non-negative, got " + std::to_string(t));
    }
}

}  // namespace

double GrowthSchedule::rate(double t) const {
    if (kind == Kind::constant) return base_rate;
    return base_rate * std::exp(-t / efold_time);
}

double GrowthSchedule::integral(double t) const {
    if (kind == Kind::constant) return base_rate * t;
    // tau r0 (1 - exp(-t/tau)); expm1 keeps precision for t << tau.
    return -efold_time * base_rate * std::expm1(-t / efold_time);
}

double GrowthSchedule::integral_limit() const {
    if (kind == Kind::exponential_decay) return efold_time * base_rate;
    if (base_rate == 0.0) return 0.0;
    return base_rate > 0.0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
}

void GrowthSchedule::validate() const {
    if (!std::isfinite(base_rate)) throw DomainError("schedule base_rate must be finite");
    if (kind == Kind::exponential_decay && !(efold_time > 0.0 && std::isfinite(efold_time))) {
        throw DomainError("exponential-decay schedule needs efold_time > 0");
    }
}

void EconomyParams::validate() const {
    if (!(e_bau0 > 0.0)) throw DomainError("e_bau0 must be positive");
    if (!(gdp0 > 0.0)) throw DomainError("gdp0 must be positive");
    if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must lie in (0, 1]");
    if (!(e_hist >= 0.0)) throw DomainError("e_hist must be non-negative");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
}

double history_for_warming(double warming, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("TCRE alpha must be positive");
    return warming / alpha;
}

double integrated_rate(const GrowthSchedule& schedule, double t) {
    require_time(t);
    return schedule.integral(t);
}

double bau_emission_rate(const EconomyParams& econ, const GrowthSchedule& growth, double t) {
    require_time(t);
    return econ.e_bau0 * std::exp(econ.theta * growth.integral(t));
}

double bau_growth_rate(const EconomyParams& econ, const GrowthSchedule& growth, double t) {
    return econ.theta * growth.rate(t);
}

double bau_shape_integral(const EconomyParams& econ, const GrowthSchedule& growth, double a,
                          double b) {
    require_time(a);
    require_time(b);
    if (growth.kind == GrowthSchedule::Kind::constant) {
        const double g = econ.theta * growth.base_rate;
        if (g == 0.0) return b - a;
        // (e^{gb} - e^{ga}) / g, written to stay accurate for small g(b - a).
        return std::exp(g * a) * std::expm1(g * (b - a)) / g;
    }
    return numerics::integrate(
        [&](double t) { return std::exp(econ.theta * growth.integral(t)); }, a, b, 1e-13);
}

double bau_cumulative(const EconomyParams& econ, const GrowthSchedule& growth, double t,
                      bool include_history) {
    require_time(t);
    const double future =
        t == 0.0 ? 0.0
                 : numerics::integrate(
                       [&](double s) { return bau_emission_rate(econ, growth, s); }, 0.0, t,
                       1e-12);
    return include_history ? future + econ.e_hist : future;
}

double gdp(const EconomyParams& econ, const GrowthSchedule& growth, double t) {
    require_time(t);
    return econ.gdp0 * std::exp(growth.integral(t));
}

}  // namespace abatement
