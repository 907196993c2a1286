#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abatement/pathway.hpp"

namespace abatement {

/// One learning/damage combination to solve for every M_tot.
struct Variant {
    std::string label = "base";
    LearningModel learning;
    DamageModel damage;  ///< alpha is overwritten by the scenario's climate.alpha

    bool operator==(const Variant&) const = default;
};

struct PerturbationSettings {
    int trials = 100;
    double amplitude_fraction = 0.005;  ///< max |dM| as a fraction of M_tot
    std::uint64_t seed = 0;

    bool operator==(const PerturbationSettings&) const = default;
};

struct ScenarioConfig {
    EconomyParams econ;
    GrowthSchedule growth = GrowthSchedule::exponential_decay(0.04, 40.0);
    GrowthSchedule interest = GrowthSchedule::constant(0.03);
    AbatementCostCurve curve;
    double alpha = kDefaultTcre;  ///< K / Gton CO2
    double warming0 = kDefaultWarming0;
    std::vector<Variant> variants{Variant{}};
    std::vector<double> m_tots{3000.0};
    double start_year = 0.0;
    SolverConfig solver;
    PerturbationSettings perturbation;
    std::string output_dir = "out";

    Models models_for(const Variant& variant) const;
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parse a scenario from JSON text. Unknown keys, wrong types and invalid
/// parameters raise ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

/// Serialize with every derived value resolved (calibrated damages, history);
/// parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& config);

enum class SweepResponse { tax_growth, initial_tax, delay_cost_growth, overshoot_threshold };

/// Parameters a sweep axis may vary.
enum class SweepParam { start_year, horizon, interest, growth, theta, c2, m_tot, final_warming,
                        damage_at_2_5K, learning_m_h, alpha };

struct SweepAxis {
    SweepParam param = SweepParam::start_year;
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
    ScenarioConfig scenario;  ///< first variant and first M_tot define the base point
    SweepAxis axis1;
    SweepAxis axis2;
    SweepResponse response = SweepResponse::delay_cost_growth;
    std::optional<double> final_warming;  ///< K; initial_tax uses the goal form when set
    std::string output = "sweep.csv";

    void validate() const;

    bool operator==(const SweepSpec&) const = default;
};

SweepSpec parse_sweep(const std::string& json_text);
SweepSpec load_sweep(const std::string& path);

const char* param_name(SweepParam param);
const char* response_name(SweepResponse response);

}  // namespace abatement
