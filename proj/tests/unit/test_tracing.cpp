#include "dynas/tracing.hpp"

#include <doctest.h>

#include <cmath>

using namespace dynas;

TEST_CASE("target grid") {
    CHECK(TargetGrid::targets().size() == 51);
    CHECK(TargetGrid::target(0) == doctest::Approx(100.0));
    CHECK(TargetGrid::target(50) == doctest::Approx(1e-8));
    CHECK(TargetGrid::exponent(37) == doctest::Approx(-5.4));
    CHECK(TargetGrid::index_of_exponent(-5.4) == 37);
    CHECK(TargetGrid::index_of_exponent(2.0) == 0);
    CHECK_THROWS_AS(TargetGrid::index_of_exponent(-5.3), UsageError);
    CHECK(TargetGrid::nearest_index(3.98e-6) == 37);
    for (int k = 1; k < TargetGrid::size; ++k) CHECK(TargetGrid::target(k) < TargetGrid::target(k - 1));
}

TEST_CASE("termination reasons round-trip") {
    for (auto r : {TerminationReason::target_hit, TerminationReason::budget_exhausted,
                   TerminationReason::algorithm_converged}) {
        CHECK(parse_termination_reason(to_string(r)) == r);
    }
    CHECK_THROWS_AS(parse_termination_reason("nope"), UsageError);
}

TEST_CASE("evaluator enforces the budget") {
    const auto p = instantiate({1, 2, 1}, 0);
    BudgetedEvaluator ev(p, 3, 1e-8);
    const Vector x = Vector::Constant(2, 4.0);
    ev(x);
    ev(x);
    ev(x);
    CHECK(ev.budget_exhausted());
    bool thrown = false;
    try {
        ev(x);
    } catch (const StopRequested& s) {
        thrown = s.cause == StopRequested::Cause::budget_exhausted;
    }
    CHECK(thrown);
    CHECK(ev.evals_used() == 3);
}

TEST_CASE("evaluator records first hits and best-so-far") {
    const auto p = instantiate({1, 2, 1}, 0);
    BudgetedEvaluator ev(p, 100, 1e-8);
    const Vector far = p.x_opt() + Vector::Constant(2, 3.0);    // precision 18
    const Vector near = p.x_opt() + Vector::Constant(2, 0.01);  // precision 2e-4
    ev(far);
    CHECK(ev.best_precision() == doctest::Approx(18.0));
    CHECK(ev.trace().hit_at[0] == 1);
    CHECK(ev.trace().hit_at[3] == 1);  // 10^1.4 = 25.1
    CHECK(!ev.trace().hit_at[4]);      // 10^1.2 = 15.8
    ev(far + Vector::Constant(2, 1.0));
    CHECK(ev.best_precision() == doctest::Approx(18.0));
    ev(near);
    CHECK(ev.trace().hit_at[TargetGrid::index_of_exponent(-3.6)] == 3);
    CHECK(!ev.trace().hit_at[TargetGrid::index_of_exponent(-3.8)]);
    CHECK(hitting_time(ev.trace(), 3e-4) == 3);
    CHECK(!hitting_time(ev.trace(), 1e-8));
    CHECK(ev.best_point() == near);
}

TEST_CASE("stop target raises after recording") {
    const auto p = instantiate({1, 2, 1}, 0);
    BudgetedEvaluator ev(p, 100, 1e-8);
    ev.set_stop_target(1.0);
    ev(p.x_opt() + Vector::Constant(2, 3.0));
    bool stopped = false;
    try {
        ev(p.x_opt());
    } catch (const StopRequested& s) {
        stopped = s.cause == StopRequested::Cause::target_reached;
    }
    CHECK(stopped);
    CHECK(ev.evals_used() == 2);
    CHECK(ev.best_precision() == 0.0);
    CHECK(ev.trace().hit_at[50] == 2);
}

TEST_CASE("observer sees every evaluation") {
    const auto p = instantiate({1, 3, 1}, 0);
    BudgetedEvaluator ev(p, 10, 1e-8);
    int calls = 0;
    EvalCount last = 0;
    ev.set_observer([&](EvalCount e, double, double) {
        ++calls;
        last = e;
    });
    for (int i = 0; i < 4; ++i) ev(Vector::Constant(3, i));
    CHECK(calls == 4);
    CHECK(last == 4);
}
