#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abatement/analytic.hpp"
#include "abatement/config.hpp"
#include "abatement/pathway.hpp"

namespace abatement {

struct GrowthFit {
    double rate = 0.0;  ///< fraction / yr
    double stderr_rate = 0.0;
    double ci_low = 0.0;   ///< 95%, rate -/+ 1.96 stderr
    double ci_high = 0.0;
};

/// OLS slope of ln(value) against year. Throws DomainError for fewer than
/// three points or any nonpositive value.
GrowthFit fit_growth_rate(std::span<const double> years, std::span<const double> values);

/// Growth of the tax sampled at whole years from the start year onwards.
GrowthFit tax_growth(const Pathway& path);
/// Same for the position on the cost curve.
GrowthFit sigma_growth(const Pathway& path);

/// Pathway columns as CSV text, 12 significant digits.
std::string pathway_csv(const Pathway& path);

struct RunRow {
    std::string label;
    std::string learning;
    std::string damage;
    double m_tot = 0.0;
    bool ok = false;
    std::string message;
    std::string file;  ///< pathway CSV name, empty on failure
    Pathway path;
    GrowthFit growth;  ///< NaN when the tax is zero or undefined
    double el_residual = 0.0;
    PerturbationReport perturbation;
};

struct RunOptions {
    std::string out_dir;  ///< empty: config's output_dir; "-" keeps results in memory only
    int threads = 0;      ///< 0: hardware concurrency
};

/// Solve every (variant, M_tot) pair. Failures are recorded per row and the
/// remaining rows still run. Writes one CSV per row plus summary.csv and the
/// resolved config.json.
std::vector<RunRow> run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

std::string summary_csv(const std::vector<RunRow>& rows);

/// Analytic view of the scenario's first M_tot.
analytic::Scenario to_analytic(const ScenarioConfig& config);

/// Set one sweep parameter on a copy of the base scenario. final_warming
/// lands in `goal`.
ScenarioConfig apply_param(ScenarioConfig config, SweepParam param, double value,
                           std::optional<double>& goal);

/// The response at a single point: first variant, first M_tot.
double evaluate_response(const ScenarioConfig& config, SweepResponse response,
                         const std::optional<double>& goal);

struct SweepCell {
    double x1 = 0.0;
    double x2 = 0.0;
    double value = 0.0;  ///< NaN on failure
    std::string error;
};

/// Axis1-major grid of responses.
std::vector<SweepCell> run_sweep(const SweepSpec& spec, int threads = 0);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepCell>& cells);

}  // namespace abatement
