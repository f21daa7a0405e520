#pragma once

#include "dynas/optimizer.hpp"

#include <deque>
#include <limits>
#include <optional>

namespace dynas {

struct BfgsState {
    Vector x;
    /// Objective value at x, when already known.
    std::optional<double> f;
    /// Forward-difference gradient at x, when already computed.
    std::optional<Vector> gradient;
    Matrix inv_hessian;
    /// Accepted iterates, most recent first.
    std::deque<Vector> recent_points;
    /// Value of the previous iterate; drives the initial trial step.
    double previous_f = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    int line_search_failures = 0;
    bool finished = false;
};

/// Quasi-Newton BFGS with forward-difference gradients and a strong-Wolfe
/// line search.
class Bfgs final : public Optimizer {
public:
    /// Cold start: x uniform in [-5, 5]^d, identity inverse Hessian.
    Bfgs(const OptimizerConfig& config, int dimension);
    Bfgs(const OptimizerConfig& config, BfgsState initial);

    Algorithm algorithm() const override { return Algorithm::bfgs; }
    void step(BudgetedEvaluator& ev) override;
    bool is_finished() const override { return state_.finished; }
    void export_state(WarmStartState& ws) const override;

    const BfgsState& state() const { return state_; }

private:
    struct LineSearchResult {
        double alpha = 0.0;
        double f = 0.0;
        Vector gradient;
    };

    Vector finite_difference_gradient(BudgetedEvaluator& ev, const Vector& x, double fx) const;
    std::optional<LineSearchResult> line_search(BudgetedEvaluator& ev, const Vector& direction) const;
    void push_iterate(const Vector& x);

    BfgsParams params_;
    BfgsState state_;
};

}  // namespace dynas
