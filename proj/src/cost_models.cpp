#include "abatement/cost_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "abatement/errors.hpp"

namespace abatement {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double abatement_fraction(double m_dot, double m_max) {
    if (!(m_max > 0.0)) throw DomainError("maximum abatement rate must be positive");
    if (!(m_dot >= 0.0)) throw DomainError("abatement rate must be non-negative");
    return m_dot / m_max;
}

}  // namespace

void AbatementCostCurve::validate() const {
    if (!std::isfinite(c0)) throw DomainError("c0 must be finite");
    if (!(c1 > 0.0)) throw DomainError("c1 must be positive");
    if (!(c2 > 0.0)) throw DomainError("c2 must be positive");
}

void validate(const LearningModel& learning) {
    std::visit(overloaded{
                   [](const NoLearning&) {},
                   [](const AdditiveLearning& l) {
                       if (!(l.c_f > 0.0)) throw DomainError("additive learning needs c_f > 0");
                   },
                   [](const ExponentialLearning& l) {
                       if (!(l.m_h > 0.0)) throw DomainError("exponential learning needs M_h > 0");
                   },
                   [](const PowerLawLearning& l) {
                       if (!(l.b > 0.0)) throw DomainError("power-law learning needs b > 0");
                       if (!(l.m0 > 0.0)) throw DomainError("power-law learning needs M0 > 0");
                   },
               },
               learning);
}

std::string_view learning_name(const LearningModel& learning) {
    return std::visit(overloaded{
                          [](const NoLearning&) { return std::string_view{"none"}; },
                          [](const AdditiveLearning&) { return std::string_view{"additive"}; },
                          [](const ExponentialLearning&) { return std::string_view{"exponential"}; },
                          [](const PowerLawLearning&) { return std::string_view{"power-law"}; },
                      },
                      learning);
}

double initial_stock(const LearningModel& learning) {
    if (const auto* p = std::get_if<PowerLawLearning>(&learning)) return p->m0;
    return 0.0;
}

LearningTerms learning_terms(const LearningModel& learning, double m) {
    return std::visit(
        overloaded{
            [&](const NoLearning&) {
                if (!(m >= 0.0)) throw DomainError("cumulative abatement must be non-negative");
                return LearningTerms{};
            },
            [&](const AdditiveLearning& l) {
                if (!(m >= 0.0)) throw DomainError("cumulative abatement must be non-negative");
                return LearningTerms{l.c_f * m, l.c_f, 1.0, 0.0};
            },
            [&](const ExponentialLearning& l) {
                if (!(m >= 0.0)) throw DomainError("cumulative abatement must be non-negative");
                const double h = std::exp(-m / l.m_h);
                return LearningTerms{0.0, 0.0, h, -h / l.m_h};
            },
            [&](const PowerLawLearning& l) {
                if (!(m >= l.m0)) {
                    throw DomainError("power-law learning needs M >= M0 (" + std::to_string(l.m0) +
                                      "), got " + std::to_string(m));
                }
                const double h = std::pow(m / l.m0, -l.b);
                return LearningTerms{0.0, 0.0, h, -l.b * h / m};
            },
        },
        learning);
}

void DamageModel::validate() const {
    if (!(alpha > 0.0)) throw DomainError("TCRE alpha must be positive");
    std::visit(overloaded{
                   [](const NoDamage&) {},
                   [](const PowerLawDamage& d) {
                       if (!(d.d0 > 0.0 && d.d1 > 0.0 && d.t0 > 0.0)) {
                           throw DomainError("power-law damage needs d0, d1, T0 > 0");
                       }
                   },
                   [](const LogisticDamage& d) {
                       if (!(d.d2 > 0.0 && d.e_d > 0.0)) {
                           throw DomainError("logistic damage needs d2, E_D > 0");
                       }
                   },
               },
               shape);
}

std::string_view damage_name(const DamageModel& damage) {
    return std::visit(overloaded{
                          [](const NoDamage&) { return std::string_view{"none"}; },
                          [](const PowerLawDamage&) { return std::string_view{"power-law"}; },
                          [](const LogisticDamage&) { return std::string_view{"logistic"}; },
                      },
                      damage.shape);
}

double average_cost(const AbatementCostCurve& curve, const LearningModel& learning, double m_dot,
                    double m_max, double m) {
    const double sigma = abatement_fraction(m_dot, m_max);
    const LearningTerms lt = learning_terms(learning, m);
    return (curve.c0 + curve.c1 * std::pow(sigma, curve.c2) - lt.f) * lt.h;
}

double marginal_cost(const AbatementCostCurve& curve, const LearningModel& learning, double m_dot,
                     double m_max, double m) {
    const double sigma = abatement_fraction(m_dot, m_max);
    const LearningTerms lt = learning_terms(learning, m);
    return (curve.c0 + (curve.c2 + 1.0) * curve.c1 * std::pow(sigma, curve.c2) - lt.f) * lt.h;
}

double warming(const DamageModel& damage, double cumulative_emissions) {
    return damage.alpha * cumulative_emissions;
}

namespace {

void require_power_base(const PowerLawDamage& d, double e) {
    if (e < 0.0 && std::floor(d.d1) != d.d1) {
        throw DomainError("power-law damage with non-integer exponent at negative cumulative emissions " +
                          std::to_string(e));
    }
}

}  // namespace

double damage_fraction(const DamageModel& damage, double e) {
    return std::visit(overloaded{
                          [](const NoDamage&) { return 0.0; },
                          [&](const PowerLawDamage& d) {
                              require_power_base(d, e);
                              return d.d0 * std::pow(damage.alpha * e / d.t0, d.d1);
                          },
                          [&](const LogisticDamage& d) {
                              return 1.0 / (1.0 + std::exp(-e / d.e_d) / d.d2);
                          },
                      },
                      damage.shape);
}

double damage_fraction_dM(const DamageModel& damage, double e) {
    return std::visit(overloaded{
                          [](const NoDamage&) { return 0.0; },
                          [&](const PowerLawDamage& d) {
                              require_power_base(d, e);
                              // d/dE [d0 (alpha E / T0)^d1], then dE/dM = -1.
                              const double x = damage.alpha / d.t0;
                              return -d.d0 * d.d1 * x * std::pow(x * e, d.d1 - 1.0);
                          },
                          [&](const LogisticDamage& d) {
                              const double frac = 1.0 / (1.0 + std::exp(-e / d.e_d) / d.d2);
                              return -frac * (1.0 - frac) / d.e_d;
                          },
                      },
                      damage.shape);
}

DamageModel calibrate_damage(DamageKind kind, CalibrationPoint p1, CalibrationPoint p2,
                             double alpha, double t0) {
    if (!(alpha > 0.0)) throw CalibrationError("TCRE alpha must be positive");
    if (!(p1.warming > 0.0 && p1.warming < p2.warming)) {
        throw CalibrationError("calibration needs 0 < dT1 < dT2");
    }
    if (!(p1.fraction > 0.0 && p1.fraction < p2.fraction && p2.fraction < 1.0)) {
        throw CalibrationError("calibration needs 0 < d(dT1) < d(dT2) < 1");
    }

    DamageModel model;
    model.alpha = alpha;
    if (kind == DamageKind::power_law) {
        if (!(t0 > 0.0)) throw CalibrationError("reference warming T0 must be positive");
        PowerLawDamage d;
        d.t0 = t0;
        d.d1 = std::log(p2.fraction / p1.fraction) / std::log(p2.warming / p1.warming);
        d.d0 = p1.fraction / std::pow(p1.warming / t0, d.d1);
        model.shape = d;
        return model;
    }

    // Logistic: ln(1/d - 1) = -ln d2 - E/E_D is linear in E, so two points fix
    // (ln d2, 1/E_D) exactly. Increasing fractions guarantee E_D > 0.
    const double e1 = p1.warming / alpha;
    const double e2 = p2.warming / alpha;
    const double y1 = std::log(1.0 / p1.fraction - 1.0);
    const double y2 = std::log(1.0 / p2.fraction - 1.0);
    const double inv_ed = (y1 - y2) / (e2 - e1);
    if (!(inv_ed > 0.0) || !std::isfinite(inv_ed)) {
        throw CalibrationError("logistic calibration infeasible for the given points");
    }
    LogisticDamage d;
    d.e_d = 1.0 / inv_ed;
    d.d2 = std::exp(-(y1 + e1 * inv_ed));
    if (!(d.d2 > 0.0) || !std::isfinite(d.d2)) {
        throw CalibrationError("logistic calibration produced a non-finite d2");
    }
    model.shape = d;

    // Polish against the original (non-logged) equations with Newton steps in
    // (ln d2, 1/E_D); the log-linear solution is already exact up to rounding.
    auto residual = [&](const LogisticDamage& cand, double e, double target) {
        return 1.0 / (1.0 + std::exp(-e / cand.e_d) / cand.d2) - target;
    };
    for (int iter = 0; iter < 3; ++iter) {
        const double r1 = residual(d, e1, p1.fraction);
        const double r2 = residual(d, e2, p2.fraction);
        if (std::abs(r1) < 1e-15 && std::abs(r2) < 1e-15) break;
        // d(frac)/d(ln d2) = frac (1 - frac); d(frac)/d(1/E_D) = frac (1 - frac) E.
        const double f1 = p1.fraction + r1;
        const double f2 = p2.fraction + r2;
        const double a11 = f1 * (1 - f1), a12 = a11 * e1;
        const double a21 = f2 * (1 - f2), a22 = a21 * e2;
        const double det = a11 * a22 - a12 * a21;
        if (det == 0.0) break;
        const double dlog = (-r1 * a22 + r2 * a12) / det;
        const double dinv = (-r2 * a11 + r1 * a21) / det;
        d.d2 *= std::exp(dlog);
        d.e_d = 1.0 / (1.0 / d.e_d + dinv);
    }
    model.shape = d;
    const double worst = std::max(std::abs(residual(d, e1, p1.fraction)),
                                  std::abs(residual(d, e2, p2.fraction)));
    if (!(worst < 1e-10)) {
        throw CalibrationError("logistic calibration residual " + std::to_string(worst) +
                               " exceeds 1e-10");
    }
    return model;
}

}  // namespace abatement
