#include "dynas/switching.hpp"

#include <doctest.h>

using namespace dynas;

namespace {

SwitchPlan plan_of(Algorithm a1, Algorithm a2, double tau) {
    SwitchPlan plan;
    plan.a1.algorithm = a1;
    plan.a2.algorithm = a2;
    plan.tau = tau;
    return plan;
}

}  // namespace

TEST_CASE("plan validation snaps tau") {
    const SwitchPlan p = validated(plan_of(Algorithm::bfgs, Algorithm::cmaes, 3.98e-6));
    CHECK(p.tau == TargetGrid::target(37));
    CHECK(p.label() == "BFGS>CMA-ES@-5.4");
    CHECK_THROWS_AS(validated(plan_of(Algorithm::bfgs, Algorithm::cmaes, 1e-8)), ConfigError);
    CHECK_THROWS_AS(validated(plan_of(Algorithm::bfgs, Algorithm::cmaes, -1.0)), ConfigError);
    SwitchPlan bad = plan_of(Algorithm::bfgs, Algorithm::cmaes, 1e-3);
    bad.policy.step_size_window = 0;
    CHECK_THROWS_AS(validated(bad), ConfigError);
}

TEST_CASE("switch at tau hands over through one evaluator") {
    const auto p = instantiate({14, 2, 1}, 0);
    const SwitchTrace st = run_switch(plan_of(Algorithm::bfgs, Algorithm::cmaes, 1e-4), p, 20000, 3);
    REQUIRE(st.info.switch_eval.has_value());
    CHECK(!st.info.early_switch);
    CHECK(st.trace.hit_at[TargetGrid::nearest_index(1e-4)] == st.info.switch_eval);
    CHECK(st.info.phase1_evals + st.info.phase2_evals == st.trace.evals_used);
    CHECK(st.trace.evals_used <= 20000);
    CHECK(st.trace.algorithm_label == "BFGS>CMA-ES@-4");
    CHECK(st.record().switching.has_value());
}

TEST_CASE("without reaching tau the run equals plain A1") {
    const auto p = instantiate({21, 5, 2}, 0);
    SwitchPlan plan = plan_of(Algorithm::pso, Algorithm::cmaes, 1e-7);
    const SwitchTrace st = run_switch(plan, p, 300, 77);
    OptimizerConfig a1;
    a1.algorithm = Algorithm::pso;
    a1.rng_seed = 77;
    RunTrace plain = run_single(a1, p, 300, 1e-8);
    CHECK(!st.info.switch_eval);
    plain.algorithm_label = st.trace.algorithm_label;
    CHECK(plain == st.trace);
}

TEST_CASE("tau of 100 switches almost immediately") {
    const auto p = instantiate({1, 3, 1}, 0);
    const SwitchTrace st = run_switch(plan_of(Algorithm::de, Algorithm::cmaes, 100.0), p, 30000, 1);
    REQUIRE(st.info.switch_eval.has_value());
    CHECK(*st.info.switch_eval <= 15);
    CHECK(st.trace.terminated_reason == TerminationReason::target_hit);
}

TEST_CASE("early switch on A1 convergence can be turned off") {
    // BFGS stalls above 1e-8 on this cell before reaching the tiny tau.
    const auto p = instantiate({10, 5, 1}, 0);
    SwitchPlan plan = plan_of(Algorithm::bfgs, Algorithm::cmaes, TargetGrid::target(49));
    const SwitchTrace with = run_switch(plan, p, 50000, 2);
    plan.early_switch = false;
    const SwitchTrace without = run_switch(plan, p, 50000, 2);
    if (with.info.phase1_reason == TerminationReason::algorithm_converged) {
        CHECK(with.info.early_switch);
        CHECK(with.info.switch_eval.has_value());
        CHECK(!without.info.switch_eval);
        CHECK(without.trace.terminated_reason == TerminationReason::algorithm_converged);
        CHECK(without.info.phase2_evals == 0);
    } else {
        CHECK(with.info.switch_eval == without.info.switch_eval);
    }
}

TEST_CASE("switch runs are deterministic") {
    const auto p = instantiate({11, 3, 1}, 0);
    const SwitchPlan plan = plan_of(Algorithm::bfgs, Algorithm::cmaes, 1e-3);
    CHECK(run_switch(plan, p, 10000, 9).trace == run_switch(plan, p, 10000, 9).trace);
}

TEST_CASE("sweep accounting") {
    SweepOptions options;
    options.instances = {1, 2};
    options.runs_per_instance = 2;
    options.budget = 2000;
    options.seed = 4;
    const SwitchPlan plan = plan_of(Algorithm::bfgs, Algorithm::cmaes, 1e-2);
    const std::vector<double> grid{1.0, 1e-2, 1e-4};
    const SweepResult r = sweep_tau(plan, 1, 2, grid, options);
    CHECK(r.rows.size() == 12);
    CHECK(r.records.size() == 12);
    REQUIRE(r.summary.size() == 3);
    for (const auto& s : r.summary) {
        CHECK(s.runs == 4);
        CHECK(s.mean >= 0.0);
    }

    SweepResult single = sweep_tau(plan, 1, 2, {1e-2}, options);
    for (std::size_t i = 0; i < single.rows.size(); ++i) {
        const auto& row = single.rows[i];
        const auto problem = instantiate({1, 2, row.instance}, 0);
        const SwitchTrace st = run_switch(plan, problem, 2000, derive_seed(4, row.instance, row.run));
        CHECK(row.evals_used == st.trace.evals_used);
        CHECK(row.switch_eval == st.info.switch_eval);
    }

    CHECK_THROWS_AS(sweep_tau(plan, 1, 2, {1e-4, 1e-2}, options), UsageError);
    CHECK_THROWS_AS(sweep_tau(plan, 1, 2, {1e-9}, options), UsageError);
    CHECK(default_tau_grid(1e-8).size() == 50);
}
