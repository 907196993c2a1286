#pragma once

#include <string_view>
#include <variant>

#include "abatement/economy.hpp"

namespace abatement {

/// Average abatement cost without learning: c0 + c1 sigma^c2, in trillion $ / Gton.
struct AbatementCostCurve {
    double c0 = 0.0;
    double c1 = 0.55 / 2.6;  ///< gives a 550 $/ton marginal cost at sigma = 1 for c2 = 1.6
    double c2 = 1.6;

    void validate() const;

    bool operator==(const AbatementCostCurve&) const = default;
};

/// Endogenous (learning-by-doing) cost reduction as a function of cumulative abatement M.
struct NoLearning {
    bool operator==(const NoLearning&) const = default;
};
/// f(M) = c_f M: shifts the cost curve down.
struct AdditiveLearning {
    double c_f = 1e-5;  ///< trillion $ / Gton^2
    bool operator==(const AdditiveLearning&) const = default;
};
/// h(M) = exp(-M / M_h): scales the cost curve.
struct ExponentialLearning {
    double m_h = 2000.0;  ///< Gton
    bool operator==(const ExponentialLearning&) const = default;
};
/// h(M) = (M / M0)^-b; cost falls by (1/2)^b per doubling of M. Needs M >= M0 > 0.
struct PowerLawLearning {
    double b = 0.322;
    double m0 = 1.0;  ///< Gton, cumulative abatement seed stock at the start of abatement
    bool operator==(const PowerLawLearning&) const = default;
};

using LearningModel = std::variant<NoLearning, AdditiveLearning, ExponentialLearning, PowerLawLearning>;

void validate(const LearningModel& learning);
std::string_view learning_name(const LearningModel& learning);

/// Cumulative abatement at the start of abatement: M0 for power-law learning, else 0.
double initial_stock(const LearningModel& learning);

struct LearningTerms {
    double f = 0.0;   ///< additive reduction, trillion $ / Gton
    double df = 0.0;  ///< f'(M)
    double h = 1.0;   ///< multiplicative factor
    double dh = 0.0;  ///< h'(M), 1 / Gton
};

LearningTerms learning_terms(const LearningModel& learning, double m);

/// Damage fraction of GDP as a function of warming.
struct NoDamage {
    bool operator==(const NoDamage&) const = default;
};
/// d = d0 (dT / T0)^d1.
struct PowerLawDamage {
    double d0 = 0.8;
    double d1 = 2.0;
    double t0 = 10.0;  ///< K
    bool operator==(const PowerLawDamage&) const = default;
};
/// d = 1 / (1 + exp(-E / E_D) / d2), with E the cumulative emissions in Gton.
struct LogisticDamage {
    double d2 = 0.0;
    double e_d = 1.0;  ///< Gton
    bool operator==(const LogisticDamage&) const = default;
};

struct DamageModel {
    std::variant<NoDamage, PowerLawDamage, LogisticDamage> shape;
    double alpha = kDefaultTcre;  ///< TCRE, K / Gton CO2

    bool active() const { return !std::holds_alternative<NoDamage>(shape); }
    void validate() const;

    bool operator==(const DamageModel&) const = default;
};

std::string_view damage_name(const DamageModel& damage);

/// gamma = (c0 + c1 (m_dot/m_max)^c2 - f(M)) h(M).
double average_cost(const AbatementCostCurve& curve, const LearningModel& learning, double m_dot,
                    double m_max, double m);

/// beta = d(gamma m_dot)/d m_dot = (c0 + (c2+1) c1 (m_dot/m_max)^c2 - f(M)) h(M).
double marginal_cost(const AbatementCostCurve& curve, const LearningModel& learning, double m_dot,
                     double m_max, double m);

/// dT = alpha E.
double warming(const DamageModel& damage, double cumulative_emissions);

double damage_fraction(const DamageModel& damage, double cumulative_emissions);

/// Derivative of the damage fraction with respect to cumulative abatement M at
/// fixed BAU emissions (dE/dM = -1), so non-positive for increasing damages.
double damage_fraction_dM(const DamageModel& damage, double cumulative_emissions);

enum class DamageKind { power_law, logistic };

struct CalibrationPoint {
    double warming;   ///< K
    double fraction;  ///< GDP fraction lost
};

/// Fit the two-parameter damage model through two (warming, fraction) points.
/// Power-law uses the reference warming `t0`.
DamageModel calibrate_damage(DamageKind kind, CalibrationPoint p1, CalibrationPoint p2,
                             double alpha, double t0 = 10.0);

}  // namespace abatement
