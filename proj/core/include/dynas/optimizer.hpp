#pragma once

#include "dynas/problems.hpp"
#include "dynas/rng.hpp"
#include "dynas/tracing.hpp"
#include "dynas/warmstart_state.hpp"

#include <cstdint>
#include <memory>
#include <string_view>

namespace dynas {

enum class Algorithm { bfgs, mlsl, pso, cmaes, de };

inline constexpr std::array<Algorithm, 5> kPortfolio{Algorithm::bfgs, Algorithm::mlsl, Algorithm::pso,
                                                     Algorithm::cmaes, Algorithm::de};

/// "BFGS", "MLSL", "PSO", "CMA-ES", "DE".
std::string_view to_string(Algorithm algorithm);
/// Case-insensitive; accepts "CMAES" as well. Throws ConfigError.
Algorithm parse_algorithm(std::string_view name);

struct BfgsParams {
    double gradient_tolerance = 1e-10;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    int max_line_search_iterations = 20;
    /// Number of recent iterates kept for warm-starting (n + 1).
    int history = 11;
};

struct CmaesParams {
    /// 0 selects the default 4 + floor(3 ln d).
    int lambda = 0;
    double sigma0 = 0.5;
};

struct PsoParams {
    int swarm_size = 40;
    double cognitive = 1.4944;
    double social = 1.4944;
    double inertia_start = 0.9;
    double inertia_end = 0.1;
    double velocity_clamp = 5.0;
};

struct DeParams {
    int population_per_dimension = 5;
    double crossover_rate = 0.7;
    double mutation_min = 0.5;
    double mutation_max = 1.0;
    double tolerance = 1e-12;
};

struct MlslParams {
    int samples_per_dimension = 50;
    double reduced_fraction = 0.1;
    double critical_sigma = 2.0;
    double local_budget_fraction = 0.1;
    double powell_ftol = 1e-8;
};

struct OptimizerConfig {
    Algorithm algorithm = Algorithm::cmaes;
    std::uint64_t rng_seed = 0;
    BfgsParams bfgs;
    CmaesParams cmaes;
    PsoParams pso;
    DeParams de;
    MlslParams mlsl;

    /// Throws ConfigError when a hyperparameter is out of range.
    void validate() const;
};

/// Suspendable stepwise optimizer. Every objective call goes through the
/// BudgetedEvaluator passed to step(), which may throw StopRequested at any
/// evaluation; implementations commit their state at iteration boundaries so
/// an interrupted step leaves the previous consistent state behind.
class Optimizer {
public:
    virtual ~Optimizer() = default;

    virtual Algorithm algorithm() const = 0;
    /// One iteration. Performs at least one evaluation unless is_finished().
    virtual void step(BudgetedEvaluator& ev) = 0;
    virtual bool is_finished() const = 0;
    /// Fills the algorithm-specific fields of `ws` (best point is set by the caller).
    virtual void export_state(WarmStartState& ws) const = 0;
};

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config, int dimension);

/// Steps `optimizer` until the evaluator's stop target is reached, the budget
/// is gone or the optimizer reports convergence.
TerminationReason drive(Optimizer& optimizer, BudgetedEvaluator& ev);

RunTrace run_single(const OptimizerConfig& config, const ProblemInstance& problem, EvalCount budget,
                    double final_target);

/// Uniform sample in the [-5, 5]^d box.
Vector uniform_in_box(int dimension, Rng& rng);
Vector clip_to_box(Vector x);

}  // namespace dynas
