#pragma once

#include "abatement/cost_models.hpp"
#include "abatement/economy.hpp"

namespace abatement::analytic {

/// No-learning, no-damage problem with a zero-intercept cost curve and
/// abatement starting at `start_year`.
struct Scenario {
    EconomyParams econ;
    GrowthSchedule growth = GrowthSchedule::exponential_decay(0.04, 40.0);
    GrowthSchedule interest = GrowthSchedule::constant(0.03);
    AbatementCostCurve curve;
    double m_tot = 3000.0;     ///< Gton
    double start_year = 0.0;   ///< N

    void validate() const;
};

/// \int_a^b exp(I(t)/c2 + theta R(t)) dt. Adaptive Simpson at rel tol 1e-10.
double growth_integral(const Scenario& s, double a, double b);

/// Closed form of growth_integral when both schedules are constant.
double growth_integral_constant(const Scenario& s, double a, double b);

/// Position on the cost curve when abatement starts, sigma(N).
double sigma_start(const Scenario& s);

/// sigma(T) along the optimal path; overshoot is avoided iff this is below 1.
double sigma_end(const Scenario& s);

/// Present value at t = 0 of total abatement cost, trillion $.
double total_cost(const Scenario& s);

/// (1/C) dC/dN, per year.
double delay_cost_growth(const Scenario& s);

/// Closed form of delay_cost_growth for constant interest and GDP growth.
double delay_cost_growth_constant(const Scenario& s);

/// Carbon tax at the start of abatement, $ / ton.
double initial_tax(const Scenario& s);

/// (1/P) dP/dN, per year: Hotelling rate plus delay_cost_growth.
double initial_tax_delay_growth(const Scenario& s);

/// Cumulative abatement needed to end the horizon at `final_warming` K given
/// present CO2 warming `warming0` K (future BAU counted from t = 0).
double abatement_for_goal(const Scenario& s, double final_warming, double warming0, double alpha);

/// initial_tax with m_tot set by abatement_for_goal. Throws DomainError if
/// BAU already meets the goal.
double initial_tax_from_goal(Scenario s, double final_warming, double warming0, double alpha);

struct OvershootThreshold {
    double threshold = 0.0;     ///< minimum future warming reachable without overshoot, K
    double d_threshold_dN = 0.0;
    double d2_threshold_dN2 = 0.0;
    double abated_fraction = 0.0;  ///< share of future BAU emissions abated at the threshold
};

/// Only econ, schedules, curve and start_year are used (m_tot is ignored).
OvershootThreshold overshoot_threshold(const Scenario& s, double alpha);

/// Closed form of the threshold for constant interest and GDP growth.
double overshoot_threshold_constant(const Scenario& s, double alpha);

}  // namespace abatement::analytic
