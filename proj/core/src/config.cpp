#include "dynas/config.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace dynas {

namespace {

using nlohmann::json;
using Setter = std::function<void(const json&)>;

template <typename T>
Setter bind(T& field) {
    return [&field](const json& value) { field = value.get<T>(); };
}

void apply_block(const json& block, const std::string& name, const std::map<std::string, Setter>& setters) {
    if (!block.is_object()) throw ConfigError("config: '" + name + "' must be an object");
    for (const auto& [key, value] : block.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("config: unknown key '" + name + "." + key + "'");
        try {
            it->second(value);
        } catch (const json::exception&) {
            throw ConfigError("config: wrong type for '" + name + "." + key + "'");
        }
    }
}

}  // namespace

void apply_settings_json(HarnessSettings& settings, std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");

    OptimizerConfig& o = settings.optimizers;
    WarmStartPolicy& p = settings.policy;
    const std::map<std::string, std::map<std::string, Setter>> blocks{
        {"bfgs",
         {{"gradient_tolerance", bind(o.bfgs.gradient_tolerance)},
          {"wolfe_c1", bind(o.bfgs.wolfe_c1)},
          {"wolfe_c2", bind(o.bfgs.wolfe_c2)},
          {"max_line_search_iterations", bind(o.bfgs.max_line_search_iterations)}}},
        {"cmaes", {{"lambda", bind(o.cmaes.lambda)}, {"sigma0", bind(o.cmaes.sigma0)}}},
        {"pso",
         {{"swarm_size", bind(o.pso.swarm_size)},
          {"cognitive", bind(o.pso.cognitive)},
          {"social", bind(o.pso.social)},
          {"inertia_start", bind(o.pso.inertia_start)},
          {"inertia_end", bind(o.pso.inertia_end)},
          {"velocity_clamp", bind(o.pso.velocity_clamp)}}},
        {"de",
         {{"population_per_dimension", bind(o.de.population_per_dimension)},
          {"crossover_rate", bind(o.de.crossover_rate)},
          {"mutation_min", bind(o.de.mutation_min)},
          {"mutation_max", bind(o.de.mutation_max)},
          {"tolerance", bind(o.de.tolerance)}}},
        {"mlsl",
         {{"samples_per_dimension", bind(o.mlsl.samples_per_dimension)},
          {"reduced_fraction", bind(o.mlsl.reduced_fraction)},
          {"critical_sigma", bind(o.mlsl.critical_sigma)},
          {"local_budget_fraction", bind(o.mlsl.local_budget_fraction)},
          {"powell_ftol", bind(o.mlsl.powell_ftol)}}},
        {"warmstart",
         {{"mode", [&p](const json& v) { p.mode = parse_warmstart_mode(v.get<std::string>()); }},
          {"step_size_window", bind(p.step_size_window)},
          {"hyperbox_radius", bind(p.hyperbox_radius)},
          {"hessian_scale", bind(p.hessian_scale)}}},
    };

    for (const auto& [name, block] : root.items()) {
        const auto it = blocks.find(name);
        if (it == blocks.end()) throw ConfigError("config: unknown section '" + name + "'");
        apply_block(block, name, it->second);
    }
    settings.optimizers.validate();
    settings.policy.validate();
}

HarnessSettings load_settings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    HarnessSettings settings;
    apply_settings_json(settings, buffer.str());
    return settings;
}

std::string settings_to_json(const HarnessSettings& settings) {
    const OptimizerConfig& o = settings.optimizers;
    const WarmStartPolicy& p = settings.policy;
    nlohmann::ordered_json j;
    j["bfgs"] = {{"gradient_tolerance", o.bfgs.gradient_tolerance},
                 {"wolfe_c1", o.bfgs.wolfe_c1},
                 {"wolfe_c2", o.bfgs.wolfe_c2},
                 {"max_line_search_iterations", o.bfgs.max_line_search_iterations}};
    j["cmaes"] = {{"lambda", o.cmaes.lambda}, {"sigma0", o.cmaes.sigma0}};
    j["pso"] = {{"swarm_size", o.pso.swarm_size},       {"cognitive", o.pso.cognitive},
                {"social", o.pso.social},               {"inertia_start", o.pso.inertia_start},
                {"inertia_end", o.pso.inertia_end},     {"velocity_clamp", o.pso.velocity_clamp}};
    j["de"] = {{"population_per_dimension", o.de.population_per_dimension},
               {"crossover_rate", o.de.crossover_rate},
               {"mutation_min", o.de.mutation_min},
               {"mutation_max", o.de.mutation_max},
               {"tolerance", o.de.tolerance}};
    j["mlsl"] = {{"samples_per_dimension", o.mlsl.samples_per_dimension},
                 {"reduced_fraction", o.mlsl.reduced_fraction},
                 {"critical_sigma", o.mlsl.critical_sigma},
                 {"local_budget_fraction", o.mlsl.local_budget_fraction},
                 {"powell_ftol", o.mlsl.powell_ftol}};
    j["warmstart"] = {{"mode", std::string(to_string(p.mode))},
                      {"step_size_window", p.step_size_window},
                      {"hyperbox_radius", p.hyperbox_radius},
                      {"hessian_scale", p.hessian_scale}};
    return j.dump(2);
}

}  // namespace dynas
