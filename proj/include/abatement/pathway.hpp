#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "abatement/cost_models.hpp"
#include "abatement/economy.hpp"

namespace abatement {

/// Everything that defines the optimization problem apart from the target.
struct Models {
    EconomyParams econ;
    GrowthSchedule growth = GrowthSchedule::exponential_decay(0.04, 40.0);
    GrowthSchedule interest = GrowthSchedule::constant(0.03);
    AbatementCostCurve curve;
    LearningModel learning;
    DamageModel damage;

    void validate() const;

    bool operator==(const Models&) const = default;
};

struct SolverConfig {
    double dt = 0.05;            ///< years
    double shoot_tol = 1e-3;     ///< Gton, |M(T) - M_tot|
    double bracket_low = 0.1;    ///< Gton / yr, initial search interval for the start rate
    double bracket_high = 50.0;  ///< Gton / yr
    int max_iters = 200;
    double residual_tol = 1e-4;  ///< accepted Euler-Lagrange residual (normalized)

    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

/// Exogenous quantities entering the Euler-Lagrange equation at one instant.
struct ExogenousDrivers {
    double t = 0.0;
    double interest_rate = 0.0;  ///< i(t)
    double discount = 1.0;       ///< exp(-I(t))
    double bau_growth = 0.0;     ///< theta r(t)
    double m_max = 0.0;          ///< BAU emission rate, Gton / yr
    double gdp = 0.0;            ///< trillion $
    double bau_emitted = 0.0;    ///< history plus BAU cumulative emissions, Gton
};

ExogenousDrivers drivers_at(const Models& models, double t);

struct AbatementState {
    double t = 0.0;
    double m = 0.0;      ///< cumulative abatement, Gton
    double m_dot = 0.0;  ///< abatement rate, Gton / yr
};

/// The Euler-Lagrange balance in growth-rate form:
///   K M''/M' = interest + additive_learning + bau_growth + multiplicative_learning + damage
/// with K = c1 c2 (c2+1) sigma^c2.
struct EulerLagrangeTerms {
    double lhs_coefficient = 0.0;
    double interest = 0.0;                 ///< i (c0 + c1 (c2+1) sigma^c2)
    double additive_learning = 0.0;        ///< -i f(M)
    double bau_growth = 0.0;               ///< K theta r
    double multiplicative_learning = 0.0;  ///< -c1 c2 sigma^c2 M' h'/h
    double damage = 0.0;                   ///< d'(M) G / h

    double rhs() const {
        return interest + additive_learning + bau_growth + multiplicative_learning + damage;
    }
    double magnitude() const;
};

/// Throws DomainError when m_dot <= 0, where the equation is singular.
EulerLagrangeTerms el_terms(const AbatementState& state, const ExogenousDrivers& drivers,
                            const Models& models);

/// M'' solving the Euler-Lagrange equation at `state`.
double el_acceleration(const AbatementState& state, const Models& models);
double el_acceleration(const AbatementState& state, const ExogenousDrivers& drivers,
                       const Models& models);

/// Discretized trajectory on [0, T]. Abatement is zero before `start_year`;
/// the node at start_index sits exactly at start_year and carries the
/// right-hand limit of the (discontinuous) abatement rate.
struct Pathway {
    double start_year = 0.0;
    double horizon = 0.0;
    double m_tot = 0.0;
    std::size_t start_index = 0;
    int shooting_iterations = 0;

    std::vector<double> years;
    std::vector<double> m;
    std::vector<double> m_dot;
    std::vector<double> m_ddot;
    std::vector<double> sigma;
    std::vector<double> bau_rate;
    std::vector<double> emissions;
    std::vector<double> cum_emissions;  ///< includes history
    std::vector<double> warming;        ///< K
    std::vector<double> tax;            ///< $ / ton
    std::vector<double> tax_slope;      ///< $ / ton / yr, from the tax-growth equation
    std::vector<double> annual_abatement_cost;  ///< trillion $ / yr
    std::vector<double> annual_damage_cost;     ///< trillion $ / yr
    std::vector<double> annual_cost;            ///< trillion $ / yr

    double discounted_abatement = 0.0;  ///< trillion $
    double discounted_damage = 0.0;
    double discounted_total = 0.0;

    std::size_t size() const { return years.size(); }
    double m_dot_start() const { return m_dot[start_index]; }
    double sigma_start() const { return sigma[start_index]; }
    double tax_start() const { return tax[start_index]; }
};

/// Time nodes used for a solve: uniform step <= dt on [0, N] and on [N, T],
/// always with a node at N.
std::vector<double> solver_grid(double start_year, double horizon, double dt,
                                std::size_t* start_index = nullptr);

/// Fixed-step RK4 integration of the Euler-Lagrange equation from t = N with
/// M(N) = initial stock and M'(N) = m_dot_start. Kinematic columns only.
/// Throws TrajectoryError if the abatement rate reaches zero or diverges.
Pathway integrate_trajectory(double m_dot_start, double start_year, const Models& models,
                             const SolverConfig& cfg);

/// Shooting on the initial abatement rate so that M(T) = m_tot. Returns the
/// pathway with tax and cost columns populated.
Pathway solve_bvp(double m_tot, double start_year, const Models& models, const SolverConfig& cfg);

/// No-abatement pathway (m_tot = 0) with the same columns as solve_bvp.
Pathway zero_pathway(double start_year, const Models& models, const SolverConfig& cfg);

struct TaxPath {
    std::vector<double> tax;    ///< $ / ton; zero before the start year
    std::vector<double> slope;  ///< dP/dt from the tax-growth equation, $ / ton / yr
    /// Largest relative gap between the equation's dP/dt and a finite difference of P.
    double max_slope_mismatch = 0.0;
    /// Largest relative gap between P and P(N) + integral of the equation's dP/dt.
    double max_integrated_mismatch = 0.0;
};

TaxPath carbon_tax_path(const Pathway& path, const Models& models);

struct DiscountedCost {
    double abatement = 0.0;
    double damage = 0.0;
    double total = 0.0;
    std::vector<double> annual_abatement;
    std::vector<double> annual_damage;
};

DiscountedCost discounted_cost(const Pathway& path, const Models& models);

/// Largest normalized |LHS - RHS| of the Euler-Lagrange equation over interior
/// nodes after the start year, with M'' from fourth-order finite differences of M'.
double euler_lagrange_residual(const Pathway& path, const Models& models);

/// Relative gap between M(T) - M(N) and the quadrature of m_dot.
double abatement_quadrature_mismatch(const Pathway& path);

struct PerturbationReport {
    int trials = 0;
    double min_delta = 0.0;   ///< trillion $
    double mean_delta = 0.0;
    double max_delta = 0.0;
    double tolerance = 0.0;   ///< 1e-7 x discounted total

    bool optimal() const { return min_delta >= -tolerance; }
};

/// Compare the constrained objective of `path` against random smooth
/// endpoint-preserving perturbations with max |dM| = amplitude (Gton).
PerturbationReport perturbation_check(const Pathway& path, const Models& models, int n_trials,
                                      double amplitude, std::uint64_t seed = 0);

}  // namespace abatement
