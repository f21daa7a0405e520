#include "dynas/optimizer.hpp"

#include "dynas/bfgs.hpp"
#include "dynas/cmaes.hpp"
#include "dynas/de.hpp"
#include "dynas/mlsl.hpp"
#include "dynas/pso.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace dynas {

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::bfgs: return "BFGS";
        case Algorithm::mlsl: return "MLSL";
        case Algorithm::pso: return "PSO";
        case Algorithm::cmaes: return "CMA-ES";
        case Algorithm::de: return "DE";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    std::string key;
    for (const char c : name) {
        if (c != '-' && c != '_') key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (key == "BFGS") return Algorithm::bfgs;
    if (key == "MLSL") return Algorithm::mlsl;
    if (key == "PSO") return Algorithm::pso;
    if (key == "CMAES") return Algorithm::cmaes;
    if (key == "DE") return Algorithm::de;
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected BFGS, MLSL, PSO, CMA-ES or DE)");
}

void OptimizerConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("invalid hyperparameter: ") + what);
    };
    require(bfgs.gradient_tolerance > 0.0, "bfgs.gradient_tolerance must be > 0");
    require(bfgs.wolfe_c1 > 0.0 && bfgs.wolfe_c1 < bfgs.wolfe_c2 && bfgs.wolfe_c2 < 1.0,
            "bfgs Wolfe constants need 0 < c1 < c2 < 1");
    require(bfgs.max_line_search_iterations >= 1, "bfgs.max_line_search_iterations must be >= 1");
    require(bfgs.history >= 2, "bfgs.history must be >= 2");
    require(cmaes.lambda >= 0 && cmaes.lambda != 1, "cmaes.lambda must be 0 (default) or >= 2");
    require(cmaes.sigma0 > 0.0, "cmaes.sigma0 must be > 0");
    require(pso.swarm_size >= 1, "pso.swarm_size must be >= 1");
    require(pso.cognitive > 0.0 && pso.cognitive < 2.0, "pso.cognitive must be in (0, 2)");
    require(pso.social > 0.0 && pso.social < 2.0, "pso.social must be in (0, 2)");
    require(pso.velocity_clamp > 0.0, "pso.velocity_clamp must be > 0");
    require(de.population_per_dimension >= 2, "de.population_per_dimension must be >= 2");
    require(de.crossover_rate > 0.0 && de.crossover_rate <= 1.0, "de.crossover_rate must be in (0, 1]");
    require(de.mutation_min > 0.0 && de.mutation_min <= de.mutation_max && de.mutation_max < 2.0,
            "de mutation range must satisfy 0 < min <= max < 2");
    require(de.tolerance > 0.0, "de.tolerance must be > 0");
    require(mlsl.samples_per_dimension >= 1, "mlsl.samples_per_dimension must be >= 1");
    require(mlsl.reduced_fraction > 0.0 && mlsl.reduced_fraction <= 1.0, "mlsl.reduced_fraction must be in (0, 1]");
    require(mlsl.critical_sigma > 0.0, "mlsl.critical_sigma must be > 0");
    require(mlsl.local_budget_fraction > 0.0 && mlsl.local_budget_fraction <= 1.0,
            "mlsl.local_budget_fraction must be in (0, 1]");
    require(mlsl.powell_ftol > 0.0, "mlsl.powell_ftol must be > 0");
}

Vector uniform_in_box(int dimension, Rng& rng) {
    std::uniform_real_distribution<double> u(kBoxLower, kBoxUpper);
    Vector x(dimension);
    for (int i = 0; i < dimension; ++i) x[i] = u(rng);
    return x;
}

Vector clip_to_box(Vector x) { return x.cwiseMax(kBoxLower).cwiseMin(kBoxUpper); }

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config, int dimension) {
    config.validate();
    switch (config.algorithm) {
        case Algorithm::bfgs: return std::make_unique<Bfgs>(config, dimension);
        case Algorithm::mlsl: return std::make_unique<Mlsl>(config, dimension);
        case Algorithm::pso: return std::make_unique<Pso>(config, dimension);
        case Algorithm::cmaes: return std::make_unique<Cmaes>(config, dimension);
        case Algorithm::de: return std::make_unique<De>(config, dimension);
    }
    throw ConfigError("unknown algorithm");
}

TerminationReason drive(Optimizer& optimizer, BudgetedEvaluator& ev) {
    int idle_steps = 0;
    while (true) {
        if (ev.has_best() && ev.stop_target_reached()) return TerminationReason::target_hit;
        if (ev.budget_exhausted()) return TerminationReason::budget_exhausted;
        if (optimizer.is_finished()) return TerminationReason::algorithm_converged;

        const EvalCount before = ev.evals_used();
        try {
            optimizer.step(ev);
        } catch (const StopRequested& stop) {
            return stop.cause == StopRequested::Cause::target_reached ? TerminationReason::target_hit
                                                                      : TerminationReason::budget_exhausted;
        }
        // A step that neither evaluates nor finishes would spin forever.
        idle_steps = ev.evals_used() == before ? idle_steps + 1 : 0;
        if (idle_steps > 3) return TerminationReason::algorithm_converged;
    }
}

RunTrace run_single(const OptimizerConfig& config, const ProblemInstance& problem, EvalCount budget,
                    double final_target) {
    auto optimizer = make_optimizer(config, problem.dimension());
    BudgetedEvaluator ev(problem, budget, final_target);
    const TerminationReason reason = drive(*optimizer, ev);
    RunTrace trace = ev.trace();
    trace.algorithm_label = std::string(to_string(config.algorithm));
    trace.seed = config.rng_seed;
    trace.terminated_reason = reason;
    return trace;
}

}  // namespace dynas
