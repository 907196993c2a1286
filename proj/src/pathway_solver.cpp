#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>

#include "abatement/errors.hpp"
#include "abatement/numerics.hpp"
#include "abatement/pathway.hpp"

namespace abatement {

namespace {

// Abatement rates are floored here while bracketing the start rate.
constexpr double kRateFloor = 1e-9;

// Sixth-order finite-difference derivative of uniformly spaced samples; the
// first and last three nodes use off-centre seven-point stencils.
constexpr double kStencil[4][7] = {
    {-147.0, 360.0, -450.0, 400.0, -225.0, 72.0, -10.0},
    {-10.0, -77.0, 150.0, -100.0, 50.0, -15.0, 2.0},
    {2.0, -24.0, -35.0, 80.0, -30.0, 8.0, -1.0},
    {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0},
};

double derivative(std::span<const double> y, double h, std::size_t k) {
    const std::size_t n = y.size() - 1;
    if (n < 6) {
        if (n == 0) return 0.0;
        if (k == 0) return (y[1] - y[0]) / h;
        if (k == n) return (y[n] - y[n - 1]) / h;
        return (y[k + 1] - y[k - 1]) / (2.0 * h);
    }
    double sum = 0.0;
    if (k + 3 <= n) {
        const std::size_t row = std::min<std::size_t>(k, 3);
        const std::size_t first = k - row;
        for (std::size_t j = 0; j < 7; ++j) sum += kStencil[row][j] * y[first + j];
    } else {
        const std::size_t row = n - k;
        for (std::size_t j = 0; j < 7; ++j) sum -= kStencil[row][j] * y[k + row - j];
    }
    return sum / (60.0 * h);
}

ExogenousDrivers drivers_with_emitted(const Models& models, double t, double bau_emitted) {
    ExogenousDrivers d;
    d.t = t;
    d.interest_rate = models.interest.rate(t);
    d.discount = std::exp(-models.interest.integral(t));
    d.bau_growth = bau_growth_rate(models.econ, models.growth, t);
    d.m_max = bau_emission_rate(models.econ, models.growth, t);
    d.gdp = gdp(models.econ, models.growth, t);
    d.bau_emitted = bau_emitted;
    return d;
}

// Drivers at an ascending list of times, with BAU cumulative emissions
// accumulated piecewise instead of re-integrating from zero at every time.
std::vector<ExogenousDrivers> driver_table(const Models& models, std::span<const double> times) {
    std::vector<ExogenousDrivers> out;
    out.reserve(times.size());
    double emitted = models.econ.e_hist;
    double prev = 0.0;
    for (double t : times) {
        if (t > prev) {
            emitted += numerics::integrate(
                [&](double s) { return bau_emission_rate(models.econ, models.growth, s); }, prev, t,
                1e-13, 2);
            prev = t;
        }
        out.push_back(drivers_with_emitted(models, t, emitted));
    }
    return out;
}

struct Segment {
    std::size_t steps = 0;
    double h = 0.0;
};

Segment make_segment(double length, double dt) {
    if (length <= 0.0) return {};
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(length / dt - 1e-9)));
    return {steps, length / static_cast<double>(steps)};
}

double stock_floor(const Models& models) { return initial_stock(models.learning); }

// Fixed-step RK4 integration of (M, M') over [N, T], with drivers tabulated
// at every stage time so repeated shots share the quadrature work.
class TrajectoryIntegrator {
public:
    TrajectoryIntegrator(const Models& models, double start_year, const SolverConfig& cfg)
        : models_(models), start_(start_year) {
        const double horizon = models.econ.horizon;
        pre_ = make_segment(start_year, cfg.dt);
        post_ = make_segment(horizon - start_year, cfg.dt);

        std::vector<double> times;
        for (std::size_t k = 0; k < pre_.steps; ++k) times.push_back(k * pre_.h);
        for (std::size_t j = 0; j <= 2 * post_.steps; ++j) {
            times.push_back(j + 1 == 2 * post_.steps + 1 ? horizon : start_year + j * 0.5 * post_.h);
        }
        auto table = driver_table(models, times);
        pre_drivers_.assign(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(pre_.steps));
        stages_.assign(table.begin() + static_cast<std::ptrdiff_t>(pre_.steps), table.end());
        blowup_ = 1e9 * models.econ.e_bau0;
    }

    struct Shot {
        double terminal_stock = 0.0;
        bool floored = false;
    };

    // M(T) for a start rate, flooring the rate instead of failing.
    Shot shoot(double m_dot_start) const {
        Shot shot;
        double m = stock_floor(models_);
        double v = m_dot_start;
        for (std::size_t k = 0; k < post_.steps; ++k) {
            bool finite = false;
            try {
                finite = step(k, m, v, true);
            } catch (const TrajectoryError&) {
                finite = false;
            }
            if (!finite) {
                shot.terminal_stock = std::numeric_limits<double>::infinity();
                return shot;
            }
            if (v < kRateFloor) {
                v = kRateFloor;
                shot.floored = true;
            }
        }
        shot.terminal_stock = m;
        return shot;
    }

    Pathway trajectory(double m_dot_start) const {
        if (!(m_dot_start > 0.0)) {
            throw TrajectoryError("initial abatement rate must be positive", start_);
        }
        Pathway p;
        p.start_year = start_;
        p.horizon = models_.econ.horizon;
        p.start_index = pre_.steps;
        const std::size_t n = pre_.steps + post_.steps + 1;
        p.years.reserve(n);
        p.m.reserve(n);
        p.m_dot.reserve(n);

        const double m0 = stock_floor(models_);
        std::vector<const ExogenousDrivers*> node_drivers;
        for (const auto& d : pre_drivers_) {
            p.years.push_back(d.t);
            p.m.push_back(m0);
            p.m_dot.push_back(0.0);
            node_drivers.push_back(&d);
        }

        double m = m0;
        double v = m_dot_start;
        p.years.push_back(start_);
        p.m.push_back(m);
        p.m_dot.push_back(v);
        node_drivers.push_back(&stages_[0]);
        for (std::size_t k = 0; k < post_.steps; ++k) {
            if (!step(k, m, v, false) || !(v > 0.0)) {
                throw TrajectoryError("abatement rate left (0, inf) during integration",
                                      stages_[2 * k + 2].t);
            }
            p.years.push_back(stages_[2 * k + 2].t);
            p.m.push_back(m);
            p.m_dot.push_back(v);
            node_drivers.push_back(&stages_[2 * k + 2]);
        }

        p.m_ddot.assign(n, 0.0);
        p.sigma.resize(n);
        p.bau_rate.resize(n);
        p.emissions.resize(n);
        p.cum_emissions.resize(n);
        p.warming.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& d = *node_drivers[k];
            if (k >= p.start_index) {
                p.m_ddot[k] = el_acceleration({d.t, p.m[k], p.m_dot[k]}, d, models_);
            }
            p.sigma[k] = p.m_dot[k] / d.m_max;
            p.bau_rate[k] = d.m_max;
            p.emissions[k] = d.m_max - p.m_dot[k];
            p.cum_emissions[k] = d.bau_emitted - p.m[k];
            p.warming[k] = warming(models_.damage, p.cum_emissions[k]);
        }
        p.m_tot = p.m.back();
        return p;
    }

    Pathway empty() const {
        Pathway p;
        p.start_year = start_;
        p.horizon = models_.econ.horizon;
        p.start_index = pre_.steps;
        auto add = [&](const ExogenousDrivers& d) {
            p.years.push_back(d.t);
            p.m.push_back(0.0);
            p.m_dot.push_back(0.0);
            p.m_ddot.push_back(0.0);
            p.sigma.push_back(0.0);
            p.bau_rate.push_back(d.m_max);
            p.emissions.push_back(d.m_max);
            p.cum_emissions.push_back(d.bau_emitted);
            p.warming.push_back(warming(models_.damage, d.bau_emitted));
        };
        for (const auto& d : pre_drivers_) add(d);
        for (std::size_t j = 0; j < stages_.size(); j += 2) add(stages_[j]);
        return p;
    }

private:
    double accel(const ExogenousDrivers& d, double m, double v, bool floored) const {
        if (floored) {
            m = std::max(m, stock_floor(models_));
            v = std::max(v, kRateFloor);
        }
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw TrajectoryError("abatement rate reached zero", d.t);
        }
        return el_acceleration({d.t, m, v}, d, models_);
    }

    // One RK4 step; false on divergence.
    bool step(std::size_t k, double& m, double& v, bool floored) const {
        const double h = post_.h;
        const auto& d0 = stages_[2 * k];
        const auto& dm = stages_[2 * k + 1];
        const auto& d1 = stages_[2 * k + 2];
        const double k1m = v;
        const double k1v = accel(d0, m, v, floored);
        const double k2m = v + 0.5 * h * k1v;
        const double k2v = accel(dm, m + 0.5 * h * k1m, k2m, floored);
        const double k3m = v + 0.5 * h * k2v;
        const double k3v = accel(dm, m + 0.5 * h * k2m, k3m, floored);
        const double k4m = v + h * k3v;
        const double k4v = accel(d1, m + h * k3m, k4m, floored);
        m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        return std::isfinite(m) && std::isfinite(v) && std::abs(v) < blowup_;
    }

    const Models& models_;
    double start_;
    Segment pre_;
    Segment post_;
    std::vector<ExogenousDrivers> pre_drivers_;
    std::vector<ExogenousDrivers> stages_;
    double blowup_ = 0.0;
};

void require_start_year(double start_year, const Models& models) {
    if (!(start_year >= 0.0 && start_year < models.econ.horizon)) {
        throw DomainError("start year must lie in [0, T), got " + std::to_string(start_year));
    }
}

void populate_economics(Pathway& p, const Models& models) {
    TaxPath tax = carbon_tax_path(p, models);
    p.tax = std::move(tax.tax);
    p.tax_slope = std::move(tax.slope);
    DiscountedCost cost = discounted_cost(p, models);
    p.annual_abatement_cost = std::move(cost.annual_abatement);
    p.annual_damage_cost = std::move(cost.annual_damage);
    p.annual_cost.resize(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        p.annual_cost[k] = p.annual_abatement_cost[k] + p.annual_damage_cost[k];
    }
    p.discounted_abatement = cost.abatement;
    p.discounted_damage = cost.damage;
    p.discounted_total = cost.total;
}

// Objective integrand exp(-I) (A + D) at one node for given (M, M').
double objective_density(const Models& models, const ExogenousDrivers& d, double m, double v) {
    double value = average_cost(models.curve, models.learning, v, d.m_max, m) * v;
    if (models.damage.active()) value += damage_fraction(models.damage, d.bau_emitted - m) * d.gdp;
    return d.discount * value;
}

}  // namespace

void Models::validate() const {
    econ.validate();
    growth.validate();
    interest.validate();
    curve.validate();
    abatement::validate(learning);
    damage.validate();
}

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(shoot_tol > 0.0)) throw DomainError("shoot_tol must be positive");
    if (!(bracket_low > 0.0 && bracket_low < bracket_high)) {
        throw DomainError("bracket must satisfy 0 < low < high");
    }
    if (max_iters <= 0) throw DomainError("max_iters must be positive");
    if (!(residual_tol > 0.0)) throw DomainError("residual_tol must be positive");
}

ExogenousDrivers drivers_at(const Models& models, double t) {
    return drivers_with_emitted(models, t, bau_cumulative(models.econ, models.growth, t, true));
}

double EulerLagrangeTerms::magnitude() const {
    return std::abs(interest) + std::abs(additive_learning) + std::abs(bau_growth) +
           std::abs(multiplicative_learning) + std::abs(damage);
}

EulerLagrangeTerms el_terms(const AbatementState& s, const ExogenousDrivers& d, const Models& models) {
    if (!(s.m_dot > 0.0)) {
        throw DomainError("Euler-Lagrange equation is singular at non-positive abatement rate");
    }
    const auto& c = models.curve;
    const double sigma_pow = std::pow(s.m_dot / d.m_max, c.c2);
    const LearningTerms lt = learning_terms(models.learning, s.m);

    EulerLagrangeTerms e;
    e.lhs_coefficient = c.c1 * c.c2 * (c.c2 + 1.0) * sigma_pow;
    e.interest = d.interest_rate * (c.c0 + c.c1 * (c.c2 + 1.0) * sigma_pow);
    e.additive_learning = -d.interest_rate * lt.f;
    e.bau_growth = e.lhs_coefficient * d.bau_growth;
    e.multiplicative_learning = -c.c1 * c.c2 * sigma_pow * s.m_dot * lt.dh / lt.h;
    if (models.damage.active()) {
        e.damage = damage_fraction_dM(models.damage, d.bau_emitted - s.m) * d.gdp / lt.h;
    }
    return e;
}

double el_acceleration(const AbatementState& state, const ExogenousDrivers& drivers,
                       const Models& models) {
    const EulerLagrangeTerms e = el_terms(state, drivers, models);
    return state.m_dot * e.rhs() / e.lhs_coefficient;
}

double el_acceleration(const AbatementState& state, const Models& models) {
    return el_acceleration(state, drivers_at(models, state.t), models);
}

std::vector<double> solver_grid(double start_year, double horizon, double dt,
                                std::size_t* start_index) {
    const Segment pre = make_segment(start_year, dt);
    const Segment post = make_segment(horizon - start_year, dt);
    std::vector<double> grid;
    for (std::size_t k = 0; k < pre.steps; ++k) grid.push_back(k * pre.h);
    for (std::size_t k = 0; k <= post.steps; ++k) {
        grid.push_back(k == post.steps ? horizon : start_year + k * post.h);
    }
    if (start_index) *start_index = pre.steps;
    return grid;
}

Pathway integrate_trajectory(double m_dot_start, double start_year, const Models& models,
                             const SolverConfig& cfg) {
    models.validate();
    cfg.validate();
    require_start_year(start_year, models);
    return TrajectoryIntegrator(models, start_year, cfg).trajectory(m_dot_start);
}

Pathway zero_pathway(double start_year, const Models& models, const SolverConfig& cfg) {
    models.validate();
    cfg.validate();
    require_start_year(start_year, models);
    Pathway p = TrajectoryIntegrator(models, start_year, cfg).empty();
    populate_economics(p, models);
    return p;
}

Pathway solve_bvp(double m_tot, double start_year, const Models& models, const SolverConfig& cfg) {
    models.validate();
    cfg.validate();
    require_start_year(start_year, models);
    if (!(m_tot > stock_floor(models))) {
        throw DomainError("cumulative abatement target must exceed the initial stock");
    }

    const TrajectoryIntegrator integrator(models, start_year, cfg);
    // Start rate -> M(T) - M_tot, for shots that never touched the rate
    // floor; floored shots do not solve the equation and are not compared.
    std::map<double, double> samples;
    const double mono_tol = 1e-9 * std::max(1.0, m_tot);
    int evaluations = 0;
    double highest_floored = 0.0;

    auto excess = [&](double rate) {
        ++evaluations;
        const auto shot = integrator.shoot(rate);
        const double value = shot.terminal_stock - m_tot;
        if (shot.floored) {
            highest_floored = std::max(highest_floored, rate);
            return value;
        }
        auto [it, inserted] = samples.emplace(rate, value);
        if (!inserted) return it->second;
        if (it != samples.begin() && std::prev(it)->second > value + mono_tol) {
            throw SolverError("terminal stock is not monotone in the start rate near " +
                              std::to_string(rate) + " Gton/yr");
        }
        if (std::next(it) != samples.end() && value > std::next(it)->second + mono_tol) {
            throw SolverError("terminal stock is not monotone in the start rate near " +
                              std::to_string(rate) + " Gton/yr");
        }
        return value;
    };
    // Failures near floored shots mean the optimal rate would have to reach
    // zero before T, which the unconstrained equation cannot represent.
    auto fail = [&](const std::string& why, double near) -> SolverError {
        if (highest_floored > 0.0 && near <= 2.0 * highest_floored) {
            return SolverError(why + "; the abatement rate reaches zero before T for start rates up to " +
                               std::to_string(highest_floored) +
                               " Gton/yr, so M_tot = " + std::to_string(m_tot) +
                               " has no pathway with positive abatement throughout");
        }
        return SolverError(why);
    };

    double lo = cfg.bracket_low;
    double hi = cfg.bracket_high;
    double f_lo = excess(lo);
    int expansions = 0;
    while (f_lo > 0.0) {
        if (lo <= kRateFloor || ++expansions > cfg.max_iters) {
            throw InfeasibleError("no start rate undershoots the target; bracket cannot straddle");
        }
        hi = lo;
        lo = std::max(0.5 * lo, kRateFloor);
        f_lo = excess(lo);
    }
    double f_hi = excess(hi);
    while (f_hi < 0.0) {
        if (++expansions > cfg.max_iters) {
            throw InfeasibleError("target M_tot = " + std::to_string(m_tot) +
                                  " not reachable within the expanded start-rate bracket");
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = excess(hi);
    }

    // Bisection, with a secant (regula falsi) step whenever the previous step
    // at least halved the bracket.
    double root = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
    double f_root = std::min(std::abs(f_lo), std::abs(f_hi));
    bool use_secant = true;
    int iter = 0;
    while (f_root >= cfg.shoot_tol) {
        if (++iter > cfg.max_iters) {
            throw fail("shooting did not converge within max_iters", root);
        }
        const double width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            throw fail("start-rate bracket collapsed before reaching shoot_tol", root);
        }
        double x = 0.5 * (lo + hi);
        if (use_secant && std::isfinite(f_hi)) {
            const double s = lo - f_lo * width / (f_hi - f_lo);
            if (s > lo + 1e-3 * width && s < hi - 1e-3 * width) x = s;
        }
        const double fx = excess(x);
        if (fx < 0.0) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        use_secant = (hi - lo) <= 0.5 * width;
        root = x;
        f_root = std::abs(fx);
    }

    if (integrator.shoot(root).floored) {
        throw fail("converged trajectory touched the abatement-rate floor", root);
    }
    Pathway p = integrator.trajectory(root);
    p.m_tot = m_tot;
    p.shooting_iterations = evaluations;
    populate_economics(p, models);
    return p;
}

TaxPath carbon_tax_path(const Pathway& p, const Models& models) {
    const std::size_t n = p.size();
    TaxPath out;
    out.tax.assign(n, 0.0);
    out.slope.assign(n, 0.0);
    const std::size_t s = p.start_index;
    const bool abating = n > s && p.m_dot[s] > 0.0;
    if (!abating) return out;

    for (std::size_t k = s; k < n; ++k) {
        const ExogenousDrivers d = drivers_with_emitted(models, p.years[k], p.cum_emissions[k] + p.m[k]);
        const double beta = marginal_cost(models.curve, models.learning, p.m_dot[k], d.m_max, p.m[k]);
        const LearningTerms lt = learning_terms(models.learning, p.m[k]);
        const double gamma = average_cost(models.curve, models.learning, p.m_dot[k], d.m_max, p.m[k]);
        double slope = d.interest_rate * beta + (gamma * lt.dh / lt.h - lt.df * lt.h) * p.m_dot[k];
        if (models.damage.active()) {
            slope += damage_fraction_dM(models.damage, p.cum_emissions[k]) * d.gdp;
        }
        out.tax[k] = 1000.0 * beta;
        out.slope[k] = 1000.0 * slope;
    }

    const std::span<const double> tax(out.tax.data() + s, n - s);
    const double h = n - s > 1 ? p.years[s + 1] - p.years[s] : 1.0;
    double integrated = tax[0];
    for (std::size_t j = 0; j < tax.size(); ++j) {
        const std::size_t k = s + j;
        const double fd = derivative(tax, h, j);
        const double eq = out.slope[k];
        const double scale = std::max(std::abs(fd), std::abs(eq)) + 1e-8 * std::abs(tax[j]);
        if (scale > 0.0) out.max_slope_mismatch = std::max(out.max_slope_mismatch, std::abs(fd - eq) / scale);
        if (j > 0) {
            integrated += 0.5 * (p.years[k] - p.years[k - 1]) * (out.slope[k] + out.slope[k - 1]);
            if (tax[j] != 0.0) {
                out.max_integrated_mismatch =
                    std::max(out.max_integrated_mismatch, std::abs(integrated - tax[j]) / std::abs(tax[j]));
            }
        }
    }
    return out;
}

DiscountedCost discounted_cost(const Pathway& p, const Models& models) {
    const std::size_t n = p.size();
    DiscountedCost out;
    out.annual_abatement.assign(n, 0.0);
    out.annual_damage.assign(n, 0.0);
    std::vector<double> discount(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = p.years[k];
        discount[k] = std::exp(-models.interest.integral(t));
        if (k >= p.start_index && p.m_dot[k] > 0.0) {
            const double m_max = p.bau_rate[k];
            out.annual_abatement[k] =
                average_cost(models.curve, models.learning, p.m_dot[k], m_max, p.m[k]) * p.m_dot[k];
        }
        if (models.damage.active()) {
            out.annual_damage[k] =
                damage_fraction(models.damage, p.cum_emissions[k]) * gdp(models.econ, models.growth, t);
        }
    }

    std::vector<double> abate(n), dmg(n);
    for (std::size_t k = 0; k < n; ++k) {
        abate[k] = discount[k] * out.annual_abatement[k];
        dmg[k] = discount[k] * out.annual_damage[k];
    }
    const std::span<const double> years(p.years);
    // Abatement starts with a jump at start_index, so only the post-start
    // segment carries abatement cost; damages are continuous throughout.
    const std::size_t s = p.start_index;
    out.abatement = numerics::trapezoid(years.subspan(s), std::span<const double>(abate).subspan(s));
    out.damage = numerics::trapezoid(years, dmg);
    out.total = out.abatement + out.damage;
    return out;
}

double euler_lagrange_residual(const Pathway& p, const Models& models) {
    const std::size_t s = p.start_index;
    const std::size_t n = p.size();
    if (n - s < 3) return 0.0;
    const std::span<const double> rate(p.m_dot.data() + s, n - s);
    const double h = p.years[s + 1] - p.years[s];
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < rate.size(); ++j) {
        const std::size_t k = s + j;
        const ExogenousDrivers d = drivers_with_emitted(models, p.years[k], p.cum_emissions[k] + p.m[k]);
        const EulerLagrangeTerms e = el_terms({p.years[k], p.m[k], p.m_dot[k]}, d, models);
        const double lhs = e.lhs_coefficient * derivative(rate, h, j) / p.m_dot[k];
        const double rhs = e.rhs();
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

double abatement_quadrature_mismatch(const Pathway& p) {
    const std::size_t s = p.start_index;
    const std::span<const double> years(p.years);
    const double integral = numerics::corrected_trapezoid(
        years.subspan(s), std::span<const double>(p.m_dot).subspan(s),
        std::span<const double>(p.m_ddot).subspan(s));
    const double gained = p.m.back() - p.m[s];
    if (gained == 0.0) return std::abs(integral);
    return std::abs(integral - gained) / std::abs(gained);
}

PerturbationReport perturbation_check(const Pathway& p, const Models& models, int n_trials,
                                      double amplitude, std::uint64_t seed) {
    PerturbationReport report;
    report.trials = n_trials;
    report.tolerance = 1e-7 * std::abs(p.discounted_total);
    const std::size_t s = p.start_index;
    const std::size_t n = p.size();
    if (n_trials <= 0 || n - s < 2) return report;

    std::vector<ExogenousDrivers> drivers;
    drivers.reserve(n - s);
    for (std::size_t k = s; k < n; ++k) {
        drivers.push_back(drivers_with_emitted(models, p.years[k], p.cum_emissions[k] + p.m[k]));
    }
    const std::span<const double> years(p.years.data() + s, n - s);

    auto objective = [&](const std::vector<double>& dm, const std::vector<double>& dv) {
        std::vector<double> density(years.size());
        for (std::size_t j = 0; j < years.size(); ++j) {
            density[j] = objective_density(models, drivers[j], p.m[s + j] + dm[j], p.m_dot[s + j] + dv[j]);
        }
        return numerics::trapezoid(years, density);
    };

    const std::vector<double> zeros(years.size(), 0.0);
    const double baseline = objective(zeros, zeros);
    const double span_years = p.horizon - p.start_year;
    const double m_floor = initial_stock(models.learning);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    constexpr int kModes = 4;

    double sum = 0.0;
    report.min_delta = std::numeric_limits<double>::infinity();
    report.max_delta = -std::numeric_limits<double>::infinity();
    std::vector<double> dm(years.size()), dv(years.size());
    for (int trial = 0; trial < n_trials; ++trial) {
        double coeff[kModes];
        for (int k = 0; k < kModes; ++k) coeff[k] = normal(rng) / (k + 1);
        double peak = 0.0;
        for (std::size_t j = 0; j < years.size(); ++j) {
            const double u = (years[j] - p.start_year) / span_years;
            double value = 0.0;
            double slope = 0.0;
            for (int k = 0; k < kModes; ++k) {
                const double w = (k + 1) * std::numbers::pi;
                value += coeff[k] * std::sin(w * u);
                slope += coeff[k] * w / span_years * std::cos(w * u);
            }
            dm[j] = value;
            dv[j] = slope;
            peak = std::max(peak, std::abs(value));
        }
        double scale = peak > 0.0 ? amplitude / peak : 0.0;
        // Shrink until the perturbed rate stays positive so the cost curve is defined.
        for (int shrink = 0; shrink < 60; ++shrink) {
            bool ok = true;
            for (std::size_t j = 0; j < years.size() && ok; ++j) {
                ok = p.m_dot[s + j] + scale * dv[j] > 0.0 && p.m[s + j] + scale * dm[j] >= m_floor;
            }
            if (ok) break;
            scale *= 0.5;
        }
        for (std::size_t j = 0; j < years.size(); ++j) {
            dm[j] *= scale;
            dv[j] *= scale;
        }
        dm.front() = 0.0;
        dm.back() = 0.0;
        const double delta = objective(dm, dv) - baseline;
        sum += delta;
        report.min_delta = std::min(report.min_delta, delta);
        report.max_delta = std::max(report.max_delta, delta);
    }
    report.mean_delta = sum / n_trials;
    return report;
}

}  // namespace abatement
