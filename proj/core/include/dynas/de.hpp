#pragma once

#include "dynas/optimizer.hpp"

#include <optional>

namespace dynas {

struct DeState {
    std::vector<Vector> population;
    std::vector<std::optional<double>> values;
    std::size_t best = 0;
    int generation = 0;
    bool initialized = false;
    bool finished = false;
};

/// Binomial crossover mask: each gene takes the mutant with probability
/// `crossover_rate`, and one uniformly chosen gene always does.
std::vector<bool> binomial_crossover_mask(Rng& rng, int dimension, double crossover_rate);

/// DE/best/1/bin with per-generation dithered F and immediate replacement.
class De final : public Optimizer {
public:
    /// Cold start: 5d members uniform in [-5, 5]^d.
    De(const OptimizerConfig& config, int dimension);
    De(const OptimizerConfig& config, DeState initial);

    Algorithm algorithm() const override { return Algorithm::de; }
    void step(BudgetedEvaluator& ev) override;
    bool is_finished() const override { return state_.finished; }
    void export_state(WarmStartState& ws) const override;

    const DeState& state() const { return state_; }

    /// Overrides the mutation factor for every following generation (tests).
    void fix_mutation_factor(double f) { fixed_f_ = f; }

private:
    DeParams params_;
    DeState state_;
    Rng rng_;
    std::optional<double> fixed_f_;
};

}  // namespace dynas
