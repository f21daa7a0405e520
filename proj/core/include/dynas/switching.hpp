#pragma once

#include "dynas/optimizer.hpp"
#include "dynas/run_log.hpp"
#include "dynas/warmstart.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dynas {

/// "A1>A2@exponent", e.g. "BFGS>CMA-ES@-5.4".
std::string switch_label(std::string_view a1, std::string_view a2, int tau_index);

struct SwitchPlan {
    OptimizerConfig a1;
    OptimizerConfig a2;
    double tau = 1e-4;
    double phi = 1e-8;
    WarmStartPolicy policy;
    /// Switch as soon as A1 converges above tau instead of ending the run.
    bool early_switch = true;

    std::string label() const;
};

/// Copy of `plan` with tau snapped to the nearest grid target. Throws
/// ConfigError unless tau > phi > 0 after snapping, or when a component is invalid.
SwitchPlan validated(SwitchPlan plan);

struct SwitchTrace {
    RunTrace trace;
    SwitchInfo info;

    RunRecord record() const { return {trace, info}; }
};

/// Runs A1 until precision <= tau, warm-starts A2 from it and runs A2 until
/// phi, all through one evaluator and budget. A1 is seeded with `seed`, A2
/// with a seed derived from it. `observer` sees every evaluation of both phases.
SwitchTrace run_switch(const SwitchPlan& plan, const ProblemInstance& problem, EvalCount budget,
                       std::uint64_t seed, const BudgetedEvaluator::Observer& observer = {});

struct SweepOptions {
    std::vector<int> instances{1, 2, 3, 4, 5};
    int runs_per_instance = 5;
    /// 0 selects 10000 d.
    EvalCount budget = 0;
    std::uint64_t seed = 0;
    std::uint64_t suite_seed = 0;
    int jobs = 1;
};

struct SweepRow {
    double tau = 0.0;
    int instance = 0;
    int run = 0;
    /// Hitting time of phi; absent means not reached.
    std::optional<EvalCount> hitting_time;
    EvalCount evals_used = 0;
    std::optional<EvalCount> switch_eval;
};

struct SweepSummary {
    double tau = 0.0;
    int runs = 0;
    int successes = 0;
    /// Mean and sample standard deviation of min(T, consumed).
    double mean = 0.0;
    double stddev = 0.0;
    double ert = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summary;
    std::vector<RunRecord> records;
};

/// run_switch for every tau of `tau_grid` (descending, all > phi) on every
/// (instance, run) cell of (function_id, dimension). Cell seeds do not depend
/// on tau, so every tau sees the same A1 runs up to its switch.
SweepResult sweep_tau(const SwitchPlan& plan, int function_id, int dimension, const std::vector<double>& tau_grid,
                      const SweepOptions& options);

/// The 51-point grid restricted to targets > phi, largest first.
std::vector<double> default_tau_grid(double phi);

}  // namespace dynas
