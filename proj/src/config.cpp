#include "abatement/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "abatement/errors.hpp"
#include "json.hpp"

namespace abatement {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": must be finite");
    return x;
}

std::string text(const json& obj, const std::string& where, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

GrowthSchedule parse_schedule(const json& j, const std::string& where, GrowthSchedule fallback) {
    check_keys(j, where, {"kind", "rate", "efold_time"});
    const std::string kind = text(j, where, "kind",
                                  fallback.kind == GrowthSchedule::Kind::constant ? "constant"
                                                                                  : "exponential-decay");
    GrowthSchedule s;
    s.base_rate = number(j, where, "rate", fallback.base_rate);
    if (kind == "constant") {
        if (j.contains("efold_time")) throw ConfigError(where + ": efold_time needs kind exponential-decay");
        s.kind = GrowthSchedule::Kind::constant;
    } else if (kind == "exponential-decay") {
        s.kind = GrowthSchedule::Kind::exponential_decay;
        s.efold_time = number(j, where, "efold_time", fallback.efold_time > 0 ? fallback.efold_time : 40.0);
    } else {
        throw ConfigError(where + ".kind: unknown schedule kind '" + kind + "'");
    }
    return s;
}

json dump_schedule(const GrowthSchedule& s) {
    if (s.kind == GrowthSchedule::Kind::constant) return {{"kind", "constant"}, {"rate", s.base_rate}};
    return {{"kind", "exponential-decay"}, {"rate", s.base_rate}, {"efold_time", s.efold_time}};
}

LearningModel parse_learning(const json& j, const std::string& where) {
    const std::string model = text(j, where, "model", "none");
    if (model == "none") {
        check_keys(j, where, {"model"});
        return NoLearning{};
    }
    if (model == "additive") {
        check_keys(j, where, {"model", "c_f"});
        return AdditiveLearning{number(j, where, "c_f", AdditiveLearning{}.c_f)};
    }
    if (model == "exponential") {
        check_keys(j, where, {"model", "M_h"});
        return ExponentialLearning{number(j, where, "M_h", ExponentialLearning{}.m_h)};
    }
    if (model == "power-law") {
        check_keys(j, where, {"model", "b", "M0"});
        return PowerLawLearning{number(j, where, "b", PowerLawLearning{}.b),
                                number(j, where, "M0", PowerLawLearning{}.m0)};
    }
    throw ConfigError(where + ".model: unknown learning model '" + model + "'");
}

json dump_learning(const LearningModel& l) {
    return std::visit(overloaded{
                          [](const NoLearning&) { return json{{"model", "none"}}; },
                          [](const AdditiveLearning& a) { return json{{"model", "additive"}, {"c_f", a.c_f}}; },
                          [](const ExponentialLearning& e) {
                              return json{{"model", "exponential"}, {"M_h", e.m_h}};
                          },
                          [](const PowerLawLearning& p) {
                              return json{{"model", "power-law"}, {"b", p.b}, {"M0", p.m0}};
                          },
                      },
                      l);
}

CalibrationPoint parse_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(where + ": calibration point must be [warming_K, fraction]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

DamageModel parse_damage(const json& j, const std::string& where, double alpha) {
    const std::string model = text(j, where, "model", "none");
    DamageModel d;
    d.alpha = alpha;
    if (model == "none") {
        check_keys(j, where, {"model"});
        return d;
    }
    auto calibrated = [&](DamageKind kind, double t0) {
        const json& pts = j.at("calibrate");
        if (!pts.is_array() || pts.size() != 2) throw ConfigError(where + ".calibrate: expected two points");
        try {
            return calibrate_damage(kind, parse_point(pts[0], where + ".calibrate[0]"),
                                    parse_point(pts[1], where + ".calibrate[1]"), alpha, t0);
        } catch (const CalibrationError& e) {
            throw ConfigError(where + ".calibrate: " + e.what());
        }
    };
    if (model == "power-law") {
        check_keys(j, where, {"model", "d0", "d1", "T0", "calibrate"});
        const double t0 = number(j, where, "T0", 10.0);
        if (j.contains("calibrate")) {
            if (j.contains("d0") || j.contains("d1")) throw ConfigError(where + ": give calibrate or d0/d1, not both");
            return calibrated(DamageKind::power_law, t0);
        }
        d.shape = PowerLawDamage{number(j, where, "d0", 0.8), number(j, where, "d1", 2.0), t0};
        return d;
    }
    if (model == "logistic") {
        check_keys(j, where, {"model", "d2", "E_D", "calibrate"});
        if (j.contains("calibrate")) {
            if (j.contains("d2") || j.contains("E_D")) throw ConfigError(where + ": give calibrate or d2/E_D, not both");
            return calibrated(DamageKind::logistic, 10.0);
        }
        if (!j.contains("d2") || !j.contains("E_D")) throw ConfigError(where + ": logistic damage needs d2 and E_D or calibrate");
        d.shape = LogisticDamage{number(j, where, "d2", 0.0), number(j, where, "E_D", 0.0)};
        return d;
    }
    throw ConfigError(where + ".model: unknown damage model '" + model + "'");
}

json dump_damage(const DamageModel& d) {
    return std::visit(overloaded{
                          [](const NoDamage&) { return json{{"model", "none"}}; },
                          [](const PowerLawDamage& p) {
                              return json{{"model", "power-law"}, {"d0", p.d0}, {"d1", p.d1}, {"T0", p.t0}};
                          },
                          [](const LogisticDamage& l) {
                              return json{{"model", "logistic"}, {"d2", l.d2}, {"E_D", l.e_d}};
                          },
                      },
                      d.shape);
}

ScenarioConfig scenario_from_json(const json& root) {
    check_keys(root, "scenario", {"economy", "growth", "interest", "cost_curve", "climate", "variants",
                                  "M_tot", "start_year", "solver", "perturbation", "output_dir"});
    ScenarioConfig c;

    const json empty = json::object();
    const json& climate = root.value("climate", empty);
    check_keys(climate, "climate", {"alpha", "tcre_k_per_tton_c", "warming0"});
    if (climate.contains("alpha") && climate.contains("tcre_k_per_tton_c")) {
        throw ConfigError("climate: give alpha or tcre_k_per_tton_c, not both");
    }
    c.alpha = number(climate, "climate", "alpha", c.alpha);
    if (climate.contains("tcre_k_per_tton_c")) {
        c.alpha = number(climate, "climate", "tcre_k_per_tton_c", 1.65) / (kCo2PerCarbon * 1000.0);
    }
    c.warming0 = number(climate, "climate", "warming0", c.warming0);
    if (!(c.alpha > 0.0)) throw ConfigError("climate.alpha must be positive");

    const json& econ = root.value("economy", empty);
    check_keys(econ, "economy", {"e_bau0", "gdp0", "theta", "e_hist", "horizon"});
    c.econ.e_bau0 = number(econ, "economy", "e_bau0", c.econ.e_bau0);
    c.econ.gdp0 = number(econ, "economy", "gdp0", c.econ.gdp0);
    c.econ.theta = number(econ, "economy", "theta", c.econ.theta);
    c.econ.horizon = number(econ, "economy", "horizon", c.econ.horizon);
    c.econ.e_hist = econ.contains("e_hist") ? number(econ, "economy", "e_hist", 0.0)
                                            : history_for_warming(c.warming0, c.alpha);

    if (root.contains("growth")) c.growth = parse_schedule(root.at("growth"), "growth", c.growth);
    if (root.contains("interest")) c.interest = parse_schedule(root.at("interest"), "interest", c.interest);

    const json& curve = root.value("cost_curve", empty);
    check_keys(curve, "cost_curve", {"c0", "c1", "c2"});
    c.curve.c0 = number(curve, "cost_curve", "c0", c.curve.c0);
    c.curve.c1 = number(curve, "cost_curve", "c1", c.curve.c1);
    c.curve.c2 = number(curve, "cost_curve", "c2", c.curve.c2);

    if (root.contains("variants")) {
        const json& vs = root.at("variants");
        if (!vs.is_array() || vs.empty()) throw ConfigError("variants: expected a non-empty array");
        c.variants.clear();
        for (std::size_t k = 0; k < vs.size(); ++k) {
            const std::string where = "variants[" + std::to_string(k) + "]";
            check_keys(vs[k], where, {"label", "learning", "damage"});
            Variant v;
            v.label = text(vs[k], where, "label", "variant" + std::to_string(k));
            v.learning = parse_learning(vs[k].value("learning", empty), where + ".learning");
            v.damage = parse_damage(vs[k].value("damage", empty), where + ".damage", c.alpha);
            c.variants.push_back(std::move(v));
        }
    }
    for (auto& v : c.variants) v.damage.alpha = c.alpha;

    if (root.contains("M_tot")) {
        const json& m = root.at("M_tot");
        c.m_tots.clear();
        if (m.is_number()) {
            c.m_tots.push_back(m.get<double>());
        } else if (m.is_array()) {
            for (const auto& x : m) {
                if (!x.is_number()) throw ConfigError("M_tot: expected numbers");
                c.m_tots.push_back(x.get<double>());
            }
        } else {
            throw ConfigError("M_tot: expected a number or an array of numbers");
        }
    }
    c.start_year = number(root, "scenario", "start_year", c.start_year);

    const json& solver = root.value("solver", empty);
    check_keys(solver, "solver", {"dt", "shoot_tol", "bracket", "max_iters", "residual_tol"});
    c.solver.dt = number(solver, "solver", "dt", c.solver.dt);
    c.solver.shoot_tol = number(solver, "solver", "shoot_tol", c.solver.shoot_tol);
    c.solver.residual_tol = number(solver, "solver", "residual_tol", c.solver.residual_tol);
    if (solver.contains("max_iters")) {
        if (!solver.at("max_iters").is_number_integer()) throw ConfigError("solver.max_iters: expected an integer");
        c.solver.max_iters = solver.at("max_iters").get<int>();
    }
    if (solver.contains("bracket")) {
        const json& b = solver.at("bracket");
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
            throw ConfigError("solver.bracket: expected [low, high]");
        }
        c.solver.bracket_low = b[0].get<double>();
        c.solver.bracket_high = b[1].get<double>();
    }

    const json& pert = root.value("perturbation", empty);
    check_keys(pert, "perturbation", {"trials", "amplitude_fraction", "seed"});
    if (pert.contains("trials")) {
        if (!pert.at("trials").is_number_integer()) throw ConfigError("perturbation.trials: expected an integer");
        c.perturbation.trials = pert.at("trials").get<int>();
    }
    c.perturbation.amplitude_fraction =
        number(pert, "perturbation", "amplitude_fraction", c.perturbation.amplitude_fraction);
    if (pert.contains("seed")) {
        if (!pert.at("seed").is_number_unsigned()) throw ConfigError("perturbation.seed: expected a non-negative integer");
        c.perturbation.seed = pert.at("seed").get<std::uint64_t>();
    }

    c.output_dir = text(root, "scenario", "output_dir", c.output_dir);
    c.validate();
    return c;
}

json scenario_to_json(const ScenarioConfig& c) {
    json root;
    root["economy"] = {{"e_bau0", c.econ.e_bau0},
                       {"gdp0", c.econ.gdp0},
                       {"theta", c.econ.theta},
                       {"e_hist", c.econ.e_hist},
                       {"horizon", c.econ.horizon}};
    root["growth"] = dump_schedule(c.growth);
    root["interest"] = dump_schedule(c.interest);
    root["cost_curve"] = {{"c0", c.curve.c0}, {"c1", c.curve.c1}, {"c2", c.curve.c2}};
    root["climate"] = {{"alpha", c.alpha}, {"warming0", c.warming0}};
    json variants = json::array();
    for (const auto& v : c.variants) {
        variants.push_back({{"label", v.label}, {"learning", dump_learning(v.learning)}, {"damage", dump_damage(v.damage)}});
    }
    root["variants"] = variants;
    root["M_tot"] = c.m_tots;
    root["start_year"] = c.start_year;
    root["solver"] = {{"dt", c.solver.dt},
                      {"shoot_tol", c.solver.shoot_tol},
                      {"bracket", {c.solver.bracket_low, c.solver.bracket_high}},
                      {"max_iters", c.solver.max_iters},
                      {"residual_tol", c.solver.residual_tol}};
    root["perturbation"] = {{"trials", c.perturbation.trials},
                            {"amplitude_fraction", c.perturbation.amplitude_fraction},
                            {"seed", c.perturbation.seed}};
    root["output_dir"] = c.output_dir;
    return root;
}

json parse_text(const std::string& text_in) {
    try {
        return json::parse(text_in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ParamEntry {
    SweepParam param;
    const char* name;
};

constexpr ParamEntry kParams[] = {
    {SweepParam::start_year, "N"},         {SweepParam::horizon, "T"},
    {SweepParam::interest, "i"},           {SweepParam::growth, "r"},
    {SweepParam::theta, "theta"},          {SweepParam::c2, "c2"},
    {SweepParam::m_tot, "M_tot"},          {SweepParam::final_warming, "dT_final"},
    {SweepParam::damage_at_2_5K, "damage_at_2.5K"}, {SweepParam::learning_m_h, "M_h"},
    {SweepParam::alpha, "alpha"},
};

SweepAxis parse_axis(const json& j, const std::string& where) {
    check_keys(j, where, {"param", "from", "to", "step", "values"});
    SweepAxis axis;
    const std::string name = text(j, where, "param", "");
    bool found = false;
    for (const auto& p : kParams) {
        if (name == p.name) {
            axis.param = p.param;
            found = true;
        }
    }
    if (!found) throw ConfigError(where + ".param: unrecognized sweep parameter '" + name + "'");
    if (j.contains("values")) {
        if (j.contains("from") || j.contains("to") || j.contains("step")) {
            throw ConfigError(where + ": give values or from/to/step, not both");
        }
        const json& vs = j.at("values");
        if (!vs.is_array() || vs.empty()) throw ConfigError(where + ".values: expected a non-empty array");
        for (const auto& v : vs) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) throw ConfigError(where + ".values: expected finite numbers");
            axis.values.push_back(v.get<double>());
        }
        return axis;
    }
    if (!j.contains("from")) throw ConfigError(where + ": needs values or from/to/step");
    const double from = number(j, where, "from", 0.0);
    const double to = number(j, where, "to", from);
    const double step = number(j, where, "step", 1.0);
    if (!(step > 0.0) || to < from) throw ConfigError(where + ": need step > 0 and to >= from");
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError(where + ": range has too many points");
    for (std::size_t k = 0; k < count; ++k) axis.values.push_back(from + static_cast<double>(k) * step);
    return axis;
}

}  // namespace

Models ScenarioConfig::models_for(const Variant& variant) const {
    Models m;
    m.econ = econ;
    m.growth = growth;
    m.interest = interest;
    m.curve = curve;
    m.learning = variant.learning;
    m.damage = variant.damage;
    m.damage.alpha = alpha;
    return m;
}

void ScenarioConfig::validate() const {
    try {
        econ.validate();
        growth.validate();
        interest.validate();
        curve.validate();
        solver.validate();
        for (const auto& v : variants) {
            abatement::validate(v.learning);
            DamageModel d = v.damage;
            d.alpha = alpha;
            d.validate();
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (variants.empty()) throw ConfigError("at least one variant is required");
    if (m_tots.empty()) throw ConfigError("M_tot list must be non-empty");
    for (double m : m_tots) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("M_tot entries must be finite and non-negative");
    }
    if (!(start_year >= 0.0 && start_year < econ.horizon)) throw ConfigError("start_year must lie in [0, horizon)");
    if (perturbation.trials < 0) throw ConfigError("perturbation.trials must be non-negative");
    if (!(perturbation.amplitude_fraction >= 0.0)) throw ConfigError("perturbation.amplitude_fraction must be non-negative");
    std::set<std::string> labels;
    for (const auto& v : variants) {
        if (v.label.empty()) throw ConfigError("variant labels must be non-empty");
        for (char ch : v.label) {
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
                throw ConfigError("variant label '" + v.label + "' may only use [A-Za-z0-9._-]");
            }
        }
        if (!labels.insert(v.label).second) throw ConfigError("duplicate variant label '" + v.label + "'");
    }
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    return scenario_from_json(parse_text(json_text));
}

ScenarioConfig load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

std::string serialize_scenario(const ScenarioConfig& config) {
    return scenario_to_json(config).dump(2) + "\n";
}

const char* param_name(SweepParam param) {
    for (const auto& p : kParams) {
        if (p.param == param) return p.name;
    }
    return "?";
}

const char* response_name(SweepResponse response) {
    switch (response) {
        case SweepResponse::tax_growth: return "tax_growth";
        case SweepResponse::initial_tax: return "initial_tax";
        case SweepResponse::delay_cost_growth: return "delay_cost_growth";
        case SweepResponse::overshoot_threshold: return "overshoot_threshold";
    }
    return "?";
}

void SweepSpec::validate() const {
    scenario.validate();
    if (axis1.values.empty() || axis2.values.empty()) throw ConfigError("sweep axes must be non-empty");
    if (axis1.param == axis2.param) throw ConfigError("sweep axes must vary different parameters");
}

SweepSpec parse_sweep(const std::string& json_text) {
    const json root = parse_text(json_text);
    check_keys(root, "sweep", {"scenario", "axis1", "axis2", "response", "final_warming", "output"});
    SweepSpec spec;
    if (root.contains("scenario")) spec.scenario = scenario_from_json(root.at("scenario"));
    if (!root.contains("axis1") || !root.contains("axis2")) throw ConfigError("sweep: axis1 and axis2 are required");
    spec.axis1 = parse_axis(root.at("axis1"), "axis1");
    spec.axis2 = parse_axis(root.at("axis2"), "axis2");
    const std::string response = text(root, "sweep", "response", "");
    if (response == "tax_growth") {
        spec.response = SweepResponse::tax_growth;
    } else if (response == "initial_tax") {
        spec.response = SweepResponse::initial_tax;
    } else if (response == "delay_cost_growth") {
        spec.response = SweepResponse::delay_cost_growth;
    } else if (response == "overshoot_threshold") {
        spec.response = SweepResponse::overshoot_threshold;
    } else {
        throw ConfigError("sweep.response: unknown response '" + response + "'");
    }
    if (root.contains("final_warming")) spec.final_warming = number(root, "sweep", "final_warming", 0.0);
    spec.output = text(root, "sweep", "output", spec.output);
    spec.validate();
    return spec;
}

SweepSpec load_sweep(const std::string& path) { return parse_sweep(read_file(path)); }

}  // namespace abatement
