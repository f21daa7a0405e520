#include "dynas/switching.hpp"

#include "dynas/analysis.hpp"
#include "dynas/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace dynas {

std::string switch_label(std::string_view a1, std::string_view a2, int tau_index) {
    std::ostringstream out;
    out << a1 << '>' << a2 << '@' << TargetGrid::exponent(tau_index);
    return out.str();
}

std::string SwitchPlan::label() const {
    return switch_label(to_string(a1.algorithm), to_string(a2.algorithm), TargetGrid::nearest_index(tau));
}

SwitchPlan validated(SwitchPlan plan) {
    plan.a1.validate();
    plan.a2.validate();
    plan.policy.validate();
    if (!(plan.tau > 0.0) || !(plan.phi > 0.0) || !std::isfinite(plan.tau)) {
        throw ConfigError("switch plan: tau and phi must be positive");
    }
    plan.tau = TargetGrid::target(TargetGrid::nearest_index(plan.tau));
    if (!(plan.tau > plan.phi)) {
        throw ConfigError("switch plan: tau must be larger than phi after snapping to the target grid");
    }
    return plan;
}

SwitchTrace run_switch(const SwitchPlan& input, const ProblemInstance& problem, EvalCount budget,
                       std::uint64_t seed, const BudgetedEvaluator::Observer& observer) {
    const SwitchPlan plan = validated(input);
    OptimizerConfig a1 = plan.a1;
    OptimizerConfig a2 = plan.a2;
    a1.rng_seed = seed;
    a2.rng_seed = derive_seed(seed, "phase2");
    // The BFGS trajectory must be long enough for the step-size window.
    a1.bfgs.history = std::max(a1.bfgs.history, plan.policy.step_size_window + 1);

    BudgetedEvaluator ev(problem, budget, plan.phi);
    ev.set_stop_target(plan.tau);
    if (observer) ev.set_observer(observer);

    SwitchTrace result;
    result.info.a1 = std::string(to_string(a1.algorithm));
    result.info.a2 = std::string(to_string(a2.algorithm));
    result.info.tau = plan.tau;

    auto first = make_optimizer(a1, problem.dimension());
    const TerminationReason phase1 = drive(*first, ev);
    result.info.phase1_reason = phase1;
    result.info.phase1_evals = ev.evals_used();

    const bool converged_early =
        phase1 == TerminationReason::algorithm_converged && plan.early_switch && ev.has_best();
    TerminationReason final_reason = phase1;
    if (phase1 == TerminationReason::target_hit || converged_early) {
        result.info.switch_eval = ev.evals_used();
        result.info.early_switch = converged_early;
        ev.set_stop_target(plan.phi);
        TerminationReason phase2 = TerminationReason::target_hit;
        if (!ev.stop_target_reached()) {
            const WarmStartState ws = extract(*first, ev);
            auto second = warm_start(a1.algorithm, ws, a2, plan.policy);
            phase2 = drive(*second, ev);
        }
        result.info.phase2_reason = phase2;
        result.info.phase2_evals = ev.evals_used() - result.info.phase1_evals;
        final_reason = phase2;
    } else if (ev.stop_target_reached()) {
        // Unreachable in practice: hitting tau always switches.
        final_reason = TerminationReason::target_hit;
    }

    result.trace = ev.trace();
    result.trace.algorithm_label = plan.label();
    result.trace.seed = seed;
    result.trace.terminated_reason = final_reason;
    return result;
}

std::vector<double> default_tau_grid(double phi) {
    std::vector<double> grid;
    for (int k = 0; k < TargetGrid::size; ++k) {
        if (TargetGrid::target(k) > phi) grid.push_back(TargetGrid::target(k));
    }
    return grid;
}

SweepResult sweep_tau(const SwitchPlan& plan, int function_id, int dimension, const std::vector<double>& tau_grid,
                      const SweepOptions& options) {
    if (tau_grid.empty()) throw UsageError("sweep_tau: empty tau grid");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] > plan.phi)) throw UsageError("sweep_tau: every tau must exceed phi");
        if (i > 0 && !(tau_grid[i] < tau_grid[i - 1])) throw UsageError("sweep_tau: tau grid must be descending");
    }
    if (options.instances.empty() || options.runs_per_instance < 1) {
        throw UsageError("sweep_tau: need at least one instance and one run");
    }

    const EvalCount budget = options.budget > 0 ? options.budget : EvalCount{10000} * dimension;
    std::vector<ProblemInstance> problems;
    for (int instance : options.instances) {
        problems.push_back(instantiate({function_id, dimension, instance}, options.suite_seed));
    }

    const std::size_t cells_per_tau = problems.size() * static_cast<std::size_t>(options.runs_per_instance);
    const std::size_t total = tau_grid.size() * cells_per_tau;
    std::vector<SwitchTrace> traces(total);
    parallel_for(total, options.jobs, [&](std::size_t index) {
        const std::size_t t = index / cells_per_tau;
        const std::size_t cell = index % cells_per_tau;
        const std::size_t p = cell / static_cast<std::size_t>(options.runs_per_instance);
        const int run = static_cast<int>(cell % static_cast<std::size_t>(options.runs_per_instance));
        SwitchPlan local = plan;
        local.tau = tau_grid[t];
        const std::uint64_t seed = derive_seed(options.seed, problems[p].id().instance, run);
        traces[index] = run_switch(local, problems[p], budget, seed);
        traces[index].trace.run_index = run;
    });

    SweepResult result;
    const int phi_index = TargetGrid::nearest_index(plan.phi);
    for (std::size_t t = 0; t < tau_grid.size(); ++t) {
        std::vector<RunOutcome> outcomes;
        std::vector<double> costs;
        SweepSummary summary;
        summary.tau = TargetGrid::target(TargetGrid::nearest_index(tau_grid[t]));
        for (std::size_t cell = 0; cell < cells_per_tau; ++cell) {
            const SwitchTrace& st = traces[t * cells_per_tau + cell];
            SweepRow row;
            row.tau = summary.tau;
            row.instance = st.trace.problem.instance;
            row.run = st.trace.run_index;
            row.hitting_time = st.trace.hit_at[phi_index];
            row.evals_used = st.trace.evals_used;
            row.switch_eval = st.info.switch_eval;
            result.rows.push_back(row);
            result.records.push_back(st.record());

            outcomes.push_back({row.hitting_time, row.evals_used});
            costs.push_back(static_cast<double>(row.hitting_time.value_or(row.evals_used)));
            if (row.hitting_time) ++summary.successes;
        }
        summary.runs = static_cast<int>(costs.size());
        double sum = 0.0;
        for (double c : costs) sum += c;
        summary.mean = sum / static_cast<double>(costs.size());
        double squares = 0.0;
        for (double c : costs) squares += (c - summary.mean) * (c - summary.mean);
        summary.stddev = costs.size() > 1 ? std::sqrt(squares / static_cast<double>(costs.size() - 1)) : 0.0;
        summary.ert = ert(outcomes, budget);
        result.summary.push_back(summary);
    }
    return result;
}

}  // namespace dynas
