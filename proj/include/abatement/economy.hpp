#pragma once

namespace abatement {

/// Time-varying rate (GDP growth r(t) or risk-free interest i(t)) together
/// with its running integral from t = 0.
struct GrowthSchedule {
    enum class Kind { constant, exponential_decay };

    Kind kind = Kind::constant;
    double base_rate = 0.0;   ///< fraction / year at t = 0
    double efold_time = 0.0;  ///< years; exponential_decay only

    static GrowthSchedule constant(double rate) { return {Kind::constant, rate, 0.0}; }
    static GrowthSchedule exponential_decay(double rate0, double efold) {
        return {Kind::exponential_decay, rate0, efold};
    }

    /// Instantaneous rate at t.
    double rate(double t) const;
    /// Exact antiderivative \int_0^t rate(s) ds (no bounds check).
    double integral(double t) const;
    /// Limit of integral(t) as t -> infinity (infinite for a nonzero constant rate).
    double integral_limit() const;

    void validate() const;

    bool operator==(const GrowthSchedule&) const = default;
};

/// Conversion between TCRE per teratonne of carbon and per gigatonne of CO2.
inline constexpr double kCo2PerCarbon = 3.664;

/// Default TCRE of 1.65 K per Tton C, expressed in K per Gton CO2.
inline constexpr double kDefaultTcre = 1.65 / (kCo2PerCarbon * 1000.0);

/// Default present CO2-induced warming used to back out historical emissions.
inline constexpr double kDefaultWarming0 = 1.0;

struct EconomyParams {
    double e_bau0 = 40.0;                            ///< Gton CO2 / yr, BAU rate at t = 0
    double gdp0 = 105.0;                             ///< trillion $, GDP at t = 0
    double theta = 0.75;                             ///< income elasticity of emissions
    double e_hist = kDefaultWarming0 / kDefaultTcre; ///< Gton CO2 emitted before t = 0
    double horizon = 80.0;                           ///< years

    void validate() const;

    bool operator==(const EconomyParams&) const = default;
};

/// Cumulative emissions that produce `warming` K at TCRE `alpha` (K/Gton).
double history_for_warming(double warming, double alpha);

/// R(t) or I(t): exact integral of the schedule on [0, t]. Throws DomainError for t < 0.
double integrated_rate(const GrowthSchedule& schedule, double t);

/// BAU emission rate E'_BAU(t) = E'_BAU(0) exp(theta R(t)); also the maximum abatement rate.
double bau_emission_rate(const EconomyParams& econ, const GrowthSchedule& growth, double t);

/// Growth rate of BAU emissions, theta r(t).
double bau_growth_rate(const EconomyParams& econ, const GrowthSchedule& growth, double t);

/// BAU cumulative emissions on [0, t] by adaptive quadrature, optionally plus
/// the pre-t=0 history.
double bau_cumulative(const EconomyParams& econ, const GrowthSchedule& growth, double t,
                      bool include_history = false);

/// \int_a^b exp(theta R(t)) dt, in years. Closed form for a constant schedule.
double bau_shape_integral(const EconomyParams& econ, const GrowthSchedule& growth, double a,
                          double b);

/// G(t) = G(0) exp(R(t)).
double gdp(const EconomyParams& econ, const GrowthSchedule& growth, double t);

}  // namespace abatement
