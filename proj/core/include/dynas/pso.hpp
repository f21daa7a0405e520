#pragma once

#include "dynas/optimizer.hpp"

#include <limits>
#include <optional>

namespace dynas {

struct PsoState {
    std::vector<Vector> positions;
    std::vector<Vector> velocities;
    /// Known objective values of the current positions (unknown until evaluated).
    std::vector<std::optional<double>> values;
    std::vector<Vector> personal_best;
    std::vector<double> personal_best_values;
    Vector global_best;
    double global_best_value = std::numeric_limits<double>::infinity();
    bool initialized = false;
};

/// Inertia weight 0.9 - 0.8 t for normalized progress t in [0, 1].
double pso_inertia(const PsoParams& params, double progress);

/// Velocity clamp to [-clamp, clamp], then position clipping to the box; a
/// clipped coordinate gets zero velocity.
void pso_move(Vector& position, Vector& velocity, double velocity_clamp);

/// Global-best particle swarm with a linearly decreasing inertia weight.
class Pso final : public Optimizer {
public:
    /// Cold start: positions uniform in [-5, 5]^d, velocities uniform in [-1, 1]^d.
    Pso(const OptimizerConfig& config, int dimension);
    Pso(const OptimizerConfig& config, PsoState initial);

    Algorithm algorithm() const override { return Algorithm::pso; }
    void step(BudgetedEvaluator& ev) override;
    bool is_finished() const override { return false; }
    void export_state(WarmStartState& ws) const override;

    const PsoState& state() const { return state_; }
    PsoState& mutable_state() { return state_; }

private:
    PsoParams params_;
    PsoState state_;
    Rng rng_;
};

}  // namespace dynas
