#pragma once

#include "dynas/problems.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dynas {

/// The fixed log-spaced target grid 10^2, 10^1.8, ..., 10^-8 (51 targets).
/// Index 0 is the easiest target, index 50 the final default target.
struct TargetGrid {
    static constexpr int size = 51;

    static double target(int index);
    /// log10 of target(index), exactly a multiple of 0.2.
    static double exponent(int index);
    /// Throws UsageError if `exponent` is not on the grid (tolerance 1e-6).
    static int index_of_exponent(double exponent);
    /// Grid index whose exponent is nearest to log10(target).
    static int nearest_index(double target);
    static const std::array<double, size>& targets();
};

enum class TerminationReason { target_hit, budget_exhausted, algorithm_converged };

std::string_view to_string(TerminationReason reason);
TerminationReason parse_termination_reason(std::string_view text);

using EvalCount = std::int64_t;

/// Per-run log entry. hit_at[k] is the first evaluation whose precision was
/// <= TargetGrid::target(k); absent means never reached.
struct RunTrace {
    ProblemId problem;
    std::string algorithm_label;
    int run_index = 0;
    std::uint64_t seed = 0;
    EvalCount budget = 0;
    EvalCount evals_used = 0;
    double final_target = 1e-8;
    double best_precision = std::numeric_limits<double>::infinity();
    std::array<std::optional<EvalCount>, TargetGrid::size> hit_at{};
    TerminationReason terminated_reason = TerminationReason::budget_exhausted;

    bool operator==(const RunTrace&) const = default;
};

/// First-crossing evaluation for `target`; nullopt stands for infinity.
/// Off-grid targets are answered with the next finer grid target, which is
/// conservative (never earlier than the true crossing).
std::optional<EvalCount> hitting_time(const RunTrace& trace, double target);

/// Thrown by BudgetedEvaluator to suspend the optimizer loop. Deliberately not
/// a std::exception: it is a control signal, not an error.
struct StopRequested {
    enum class Cause { target_reached, budget_exhausted };
    Cause cause;
};

/// Routes every objective call of a run: counts evaluations, enforces the
/// budget and maintains the best-so-far / hitting-time bookkeeping.
class BudgetedEvaluator {
public:
    using Observer = std::function<void(EvalCount eval, double value, double best_precision)>;

    BudgetedEvaluator(const ProblemInstance& problem, EvalCount budget, double final_target);

    /// Evaluates x and records it. Throws StopRequested before evaluating when
    /// the budget is used up, and after recording an evaluation whose
    /// best-so-far precision reaches the active stop target.
    double operator()(const Vector& x);

    /// The stop target defaults to the final target; run_switch lowers it
    /// temporarily to tau for the first phase.
    void set_stop_target(double target) { stop_target_ = target; }
    double stop_target() const { return stop_target_; }
    bool stop_target_reached() const { return trace_.best_precision <= stop_target_; }
    bool budget_exhausted() const { return trace_.evals_used >= trace_.budget; }

    EvalCount evals_used() const { return trace_.evals_used; }
    EvalCount budget() const { return trace_.budget; }
    EvalCount remaining() const { return trace_.budget - trace_.evals_used; }
    /// evals_used / budget in [0, 1].
    double progress() const;

    int dimension() const { return problem_->dimension(); }
    const ProblemInstance& problem() const { return *problem_; }

    bool has_best() const { return trace_.evals_used > 0; }
    const Vector& best_point() const { return best_point_; }
    double best_value() const { return best_value_; }
    double best_precision() const { return trace_.best_precision; }

    void set_observer(Observer observer) { observer_ = std::move(observer); }

    const RunTrace& trace() const { return trace_; }
    RunTrace& trace() { return trace_; }

private:
    const ProblemInstance* problem_;
    RunTrace trace_;
    double stop_target_;
    Vector best_point_;
    double best_value_ = std::numeric_limits<double>::infinity();
    int next_unhit_ = 0;
    Observer observer_;
};

}  // namespace dynas
