#include "dynas/tracing.hpp"

#include <algorithm>
#include <cmath>

namespace dynas {

namespace {

std::array<double, TargetGrid::size> make_targets() {
    std::array<double, TargetGrid::size> t{};
    for (int k = 0; k < TargetGrid::size; ++k) {
        t[k] = std::pow(10.0, TargetGrid::exponent(k));
    }
    return t;
}

}  // namespace

double TargetGrid::exponent(int index) {
    // Exponents are integer fifths: 10/5 down to -40/5.
    return static_cast<double>(10 - index) / 5.0;
}

double TargetGrid::target(int index) {
    return targets().at(static_cast<std::size_t>(index));
}

const std::array<double, TargetGrid::size>& TargetGrid::targets() {
    static const auto grid = make_targets();
    return grid;
}

int TargetGrid::index_of_exponent(double exponent) {
    const double fifths = exponent * 5.0;
    const double rounded = std::round(fifths);
    const int index = 10 - static_cast<int>(rounded);
    if (std::abs(fifths - rounded) > 1e-6 || index < 0 || index >= size) {
        throw UsageError("target exponent " + std::to_string(exponent) + " is not on the grid");
    }
    return index;
}

int TargetGrid::nearest_index(double target) {
    if (!(target > 0.0)) {
        throw UsageError("target must be positive");
    }
    const int index = 10 - static_cast<int>(std::lround(std::log10(target) * 5.0));
    return std::clamp(index, 0, size - 1);
}

std::string_view to_string(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::target_hit: return "target_hit";
        case TerminationReason::budget_exhausted: return "budget_exhausted";
        case TerminationReason::algorithm_converged: return "algorithm_converged";
    }
    return "unknown";
}

TerminationReason parse_termination_reason(std::string_view text) {
    if (text == "target_hit") return TerminationReason::target_hit;
    if (text == "budget_exhausted") return TerminationReason::budget_exhausted;
    if (text == "algorithm_converged") return TerminationReason::algorithm_converged;
    throw UsageError("unknown terminated_reason '" + std::string(text) + "'");
}

std::optional<EvalCount> hitting_time(const RunTrace& trace, double target) {
    const auto& grid = TargetGrid::targets();
    // Easiest grid target that is <= target, i.e. the next finer one.
    for (int k = 0; k < TargetGrid::size; ++k) {
        if (grid[k] <= target) return trace.hit_at[k];
    }
    return std::nullopt;
}

BudgetedEvaluator::BudgetedEvaluator(const ProblemInstance& problem, EvalCount budget, double final_target)
    : problem_(&problem), stop_target_(final_target) {
    if (budget < 0) throw UsageError("budget must be non-negative");
    trace_.problem = problem.id();
    trace_.budget = budget;
    trace_.final_target = final_target;
    best_point_ = Vector::Zero(problem.dimension());
}

double BudgetedEvaluator::progress() const {
    if (trace_.budget <= 0) return 1.0;
    return static_cast<double>(trace_.evals_used) / static_cast<double>(trace_.budget);
}

double BudgetedEvaluator::operator()(const Vector& x) {
    if (trace_.evals_used >= trace_.budget) {
        throw StopRequested{StopRequested::Cause::budget_exhausted};
    }
    const double value = problem_->evaluate(x);
    const EvalCount eval = ++trace_.evals_used;
    const double precision = problem_->precision(value);

    if (value < best_value_) {
        trace_.best_precision = precision;
        best_point_ = x;
        best_value_ = value;
        const auto& grid = TargetGrid::targets();
        while (next_unhit_ < TargetGrid::size && grid[next_unhit_] >= precision) {
            trace_.hit_at[next_unhit_++] = eval;
        }
    }
    if (observer_) observer_(eval, value, trace_.best_precision);
    if (trace_.best_precision <= stop_target_) {
        throw StopRequested{StopRequested::Cause::target_reached};
    }
    return value;
}

}  // namespace dynas
