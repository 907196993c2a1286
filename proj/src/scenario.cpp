#include "abatement/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "abatement/errors.hpp"
#include "abatement/numerics.hpp"
#include "abatement/work_pool.hpp"

namespace abatement {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kUnits =
    "# units: emissions Gton CO2, rates Gton CO2/yr, tax $/ton CO2, costs trillion $, "
    "temperatures K, growth rates fraction/yr";

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string schedule_label(const GrowthSchedule& s) {
    if (s.kind == GrowthSchedule::Kind::constant) return "constant(" + fmt(s.base_rate) + ")";
    return "exponential-decay(" + fmt(s.base_rate) + ";efold=" + fmt(s.efold_time) + ")";
}

std::string metadata(const ScenarioConfig& c) {
    return "# growth=" + schedule_label(c.growth) + " interest=" + schedule_label(c.interest) +
           " horizon=" + fmt(c.econ.horizon) + " start_year=" + fmt(c.start_year);
}

GrowthFit sampled_growth(const Pathway& p, const std::vector<double>& column) {
    std::vector<double> years;
    std::vector<double> values;
    const double first = std::ceil(p.start_year - 1e-9);
    for (std::size_t k = p.start_index; k < p.size(); ++k) {
        const double t = p.years[k];
        const double whole = std::round(t);
        if (std::abs(t - whole) < 1e-9 && whole >= first) {
            years.push_back(t);
            values.push_back(column[k]);
        }
    }
    return fit_growth_rate(years, values);
}

std::string file_name(const std::string& label, double m_tot) {
    return "pathway_" + label + "_M" + fmt(m_tot) + ".csv";
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << body;
}

RunRow solve_row(const ScenarioConfig& config, const Variant& variant, double m_tot) {
    RunRow row;
    row.label = variant.label;
    row.learning = std::string(learning_name(variant.learning));
    row.damage = std::string(damage_name(variant.damage));
    row.m_tot = m_tot;
    row.growth = {kNaN, kNaN, kNaN, kNaN};
    const Models models = config.models_for(variant);
    try {
        if (m_tot == 0.0) {
            row.path = zero_pathway(config.start_year, models, config.solver);
        } else {
            row.path = solve_bvp(m_tot, config.start_year, models, config.solver);
            row.growth = tax_growth(row.path);
            row.el_residual = euler_lagrange_residual(row.path, models);
            row.perturbation = perturbation_check(row.path, models, config.perturbation.trials,
                                                  config.perturbation.amplitude_fraction * m_tot,
                                                  config.perturbation.seed);
        }
        row.ok = true;
        row.file = file_name(variant.label, m_tot);
    } catch (const std::exception& e) {
        row.ok = false;
        row.message = "variant '" + variant.label + "' M_tot=" + fmt(m_tot) + ": " + e.what();
    }
    return row;
}

}  // namespace

GrowthFit fit_growth_rate(std::span<const double> years, std::span<const double> values) {
    if (years.size() != values.size()) throw DomainError("fit_growth_rate: size mismatch");
    if (years.size() < 3) throw DomainError("fit_growth_rate: need at least three points");
    std::vector<double> logs(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(values[k] > 0.0)) throw DomainError("fit_growth_rate: values must be positive");
        logs[k] = std::log(values[k]);
    }
    const auto fit = numerics::least_squares(years, logs);
    GrowthFit g;
    g.rate = fit.slope;
    g.stderr_rate = fit.slope_stderr;
    g.ci_low = fit.slope - 1.96 * fit.slope_stderr;
    g.ci_high = fit.slope + 1.96 * fit.slope_stderr;
    return g;
}

GrowthFit tax_growth(const Pathway& path) { return sampled_growth(path, path.tax); }

GrowthFit sigma_growth(const Pathway& path) { return sampled_growth(path, path.sigma); }

std::string pathway_csv(const Pathway& p) {
    std::string out;
    out += kUnits;
    out += "\nyear,M,m_dot,sigma,emissions,cum_emissions,warming_K,tax_usd_per_ton,annual_cost_trillion\n";
    for (std::size_t k = 0; k < p.size(); ++k) {
        out += fmt(p.years[k]) + ',' + fmt(p.m[k]) + ',' + fmt(p.m_dot[k]) + ',' + fmt(p.sigma[k]) + ',' +
               fmt(p.emissions[k]) + ',' + fmt(p.cum_emissions[k]) + ',' + fmt(p.warming[k]) + ',' +
               fmt(p.tax[k]) + ',' + fmt(p.annual_cost[k]) + '\n';
    }
    return out;
}

std::string summary_csv(const std::vector<RunRow>& rows) {
    std::string out;
    out += kUnits;
    out += "\nlabel,learning,damage,M_tot,status,file,m_dot_start,sigma_start,tax_start_usd_per_ton,"
           "tax_growth,tax_growth_ci_low,tax_growth_ci_high,discounted_abatement_trillion,"
           "discounted_damage_trillion,discounted_total_trillion,el_residual,perturbation_min_delta,"
           "perturbation_mean_delta,message\n";
    for (const auto& r : rows) {
        out += r.label + ',' + r.learning + ',' + r.damage + ',' + fmt(r.m_tot) + ',' + (r.ok ? "ok" : "error") + ',' +
               r.file + ',';
        if (r.ok) {
            const Pathway& p = r.path;
            out += fmt(p.m_dot_start()) + ',' + fmt(p.sigma_start()) + ',' + fmt(p.tax_start()) + ',' +
                   fmt(r.growth.rate) + ',' + fmt(r.growth.ci_low) + ',' + fmt(r.growth.ci_high) + ',' +
                   fmt(p.discounted_abatement) + ',' + fmt(p.discounted_damage) + ',' + fmt(p.discounted_total) +
                   ',' + fmt(r.el_residual) + ',' + fmt(r.perturbation.min_delta) + ',' +
                   fmt(r.perturbation.mean_delta) + ',';
        } else {
            out += ",,,,,,,,,,,,";
        }
        std::string msg = r.message;
        for (char& ch : msg) {
            if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
        }
        out += msg + '\n';
    }
    return out;
}

std::vector<RunRow> run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    config.validate();
    std::vector<std::pair<std::size_t, double>> jobs;
    for (std::size_t v = 0; v < config.variants.size(); ++v) {
        for (double m : config.m_tots) jobs.emplace_back(v, m);
    }
    std::vector<RunRow> rows(jobs.size());
    parallel_for(jobs.size(), options.threads, [&](std::size_t k) {
        rows[k] = solve_row(config, config.variants[jobs[k].first], jobs[k].second);
    });

    const std::string dir = options.out_dir.empty() ? config.output_dir : options.out_dir;
    if (dir == "-") return rows;
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);
    for (const auto& r : rows) {
        if (r.ok) write_text(root / r.file, metadata(config) + '\n' + pathway_csv(r.path));
    }
    write_text(root / "summary.csv", metadata(config) + '\n' + summary_csv(rows));
    write_text(root / "config.json", serialize_scenario(config));
    return rows;
}

analytic::Scenario to_analytic(const ScenarioConfig& c) {
    analytic::Scenario s;
    s.econ = c.econ;
    s.growth = c.growth;
    s.interest = c.interest;
    s.curve = c.curve;
    s.m_tot = c.m_tots.front();
    s.start_year = c.start_year;
    return s;
}

ScenarioConfig apply_param(ScenarioConfig c, SweepParam param, double value, std::optional<double>& goal) {
    switch (param) {
        case SweepParam::start_year: c.start_year = value; break;
        case SweepParam::horizon: c.econ.horizon = value; break;
        case SweepParam::interest: c.interest.base_rate = value; break;
        case SweepParam::growth: c.growth.base_rate = value; break;
        case SweepParam::theta: c.econ.theta = value; break;
        case SweepParam::c2: c.curve.c2 = value; break;
        case SweepParam::m_tot: c.m_tots.front() = value; break;
        case SweepParam::final_warming: goal = value; break;
        case SweepParam::damage_at_2_5K: {
            DamageModel& d = c.variants.front().damage;
            if (value == 0.0) {
                d.shape = NoDamage{};
            } else {
                d.shape = PowerLawDamage{value / std::pow(2.5 / 10.0, 2.0), 2.0, 10.0};
            }
            break;
        }
        case SweepParam::learning_m_h: c.variants.front().learning = ExponentialLearning{value}; break;
        case SweepParam::alpha:
            c.alpha = value;
            for (auto& v : c.variants) v.damage.alpha = value;
            break;
    }
    return c;
}

double evaluate_response(const ScenarioConfig& c, SweepResponse response, const std::optional<double>& goal) {
    analytic::Scenario s = to_analytic(c);
    if (goal && response != SweepResponse::initial_tax && response != SweepResponse::overshoot_threshold) {
        s.m_tot = analytic::abatement_for_goal(s, *goal, c.warming0, c.alpha);
    }
    switch (response) {
        case SweepResponse::tax_growth: {
            const Models models = c.models_for(c.variants.front());
            const Pathway p = solve_bvp(s.m_tot, c.start_year, models, c.solver);
            return tax_growth(p).rate;
        }
        case SweepResponse::initial_tax:
            return goal ? analytic::initial_tax_from_goal(s, *goal, c.warming0, c.alpha) : analytic::initial_tax(s);
        case SweepResponse::delay_cost_growth:
            return analytic::delay_cost_growth(s);
        case SweepResponse::overshoot_threshold:
            return analytic::overshoot_threshold(s, c.alpha).threshold;
    }
    return kNaN;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec, int threads) {
    spec.validate();
    const std::size_t n2 = spec.axis2.values.size();
    std::vector<SweepCell> cells(spec.axis1.values.size() * n2);
    parallel_for(cells.size(), threads, [&](std::size_t k) {
        SweepCell& cell = cells[k];
        cell.x1 = spec.axis1.values[k / n2];
        cell.x2 = spec.axis2.values[k % n2];
        try {
            std::optional<double> goal = spec.final_warming;
            ScenarioConfig c = apply_param(spec.scenario, spec.axis1.param, cell.x1, goal);
            c = apply_param(std::move(c), spec.axis2.param, cell.x2, goal);
            c.validate();
            cell.value = evaluate_response(c, spec.response, goal);
        } catch (const std::exception& e) {
            cell.value = kNaN;
            cell.error = e.what();
        }
    });
    return cells;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepCell>& cells) {
    std::string out;
    out += kUnits;
    out += '\n' + metadata(spec.scenario) + " response=" + response_name(spec.response);
    if (spec.final_warming) out += " final_warming=" + fmt(*spec.final_warming);
    out += '\n';
    out += std::string(param_name(spec.axis1.param)) + ',' + param_name(spec.axis2.param) + ',' +
           response_name(spec.response) + '\n';
    for (const auto& c : cells) out += fmt(c.x1) + ',' + fmt(c.x2) + ',' + fmt(c.value) + '\n';
    return out;
}

}  // namespace abatement
