#include "dynas/pso.hpp"

#include <algorithm>

namespace dynas {

double pso_inertia(const PsoParams& params, double progress) {
    const double t = std::clamp(progress, 0.0, 1.0);
    return params.inertia_start - (params.inertia_start - params.inertia_end) * t;
}

void pso_move(Vector& position, Vector& velocity, double velocity_clamp) {
    velocity = velocity.cwiseMax(-velocity_clamp).cwiseMin(velocity_clamp);
    position += velocity;
    for (Eigen::Index i = 0; i < position.size(); ++i) {
        if (position[i] > kBoxUpper) {
            position[i] = kBoxUpper;
            velocity[i] = 0.0;
        } else if (position[i] < kBoxLower) {
            position[i] = kBoxLower;
            velocity[i] = 0.0;
        }
    }
}

Pso::Pso(const OptimizerConfig& config, int dimension) : params_(config.pso), rng_(config.rng_seed) {
    std::uniform_real_distribution<double> unit_velocity(-1.0, 1.0);
    const auto n = static_cast<std::size_t>(params_.swarm_size);
    state_.positions.reserve(n);
    state_.velocities.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        state_.positions.push_back(uniform_in_box(dimension, rng_));
        Vector v(dimension);
        for (int k = 0; k < dimension; ++k) v[k] = unit_velocity(rng_);
        state_.velocities.push_back(std::move(v));
    }
    state_.values.assign(n, std::nullopt);
}

Pso::Pso(const OptimizerConfig& config, PsoState initial)
    : params_(config.pso), state_(std::move(initial)), rng_(config.rng_seed) {
    if (state_.positions.empty() || state_.velocities.size() != state_.positions.size()) {
        throw UsageError("PsoState: positions and velocities must be non-empty and of equal count");
    }
    state_.values.resize(state_.positions.size());
}

void Pso::export_state(WarmStartState& ws) const {
    std::vector<Sample> population;
    if (state_.initialized) {
        for (std::size_t i = 0; i < state_.personal_best.size(); ++i) {
            population.push_back({state_.personal_best[i], state_.personal_best_values[i]});
        }
    } else {
        for (std::size_t i = 0; i < state_.positions.size(); ++i) {
            if (state_.values[i]) population.push_back({state_.positions[i], *state_.values[i]});
        }
    }
    if (!population.empty()) ws.population = std::move(population);
}

void Pso::step(BudgetedEvaluator& ev) {
    const std::size_t n = state_.positions.size();
    if (!state_.initialized) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!state_.values[i]) state_.values[i] = ev(state_.positions[i]);
        }
        state_.personal_best = state_.positions;
        state_.personal_best_values.resize(n);
        for (std::size_t i = 0; i < n; ++i) state_.personal_best_values[i] = *state_.values[i];
        const auto best = std::min_element(state_.personal_best_values.begin(), state_.personal_best_values.end());
        const auto index = static_cast<std::size_t>(best - state_.personal_best_values.begin());
        state_.global_best = state_.personal_best[index];
        state_.global_best_value = *best;
        state_.initialized = true;
        return;
    }

    const double inertia = pso_inertia(params_, ev.progress());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto d = state_.global_best.size();
    Vector r1(d);
    Vector r2(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            r1[k] = unit(rng_);
            r2[k] = unit(rng_);
        }
        Vector& x = state_.positions[i];
        Vector& v = state_.velocities[i];
        v = inertia * v + params_.cognitive * r1.cwiseProduct(state_.personal_best[i] - x) +
            params_.social * r2.cwiseProduct(state_.global_best - x);
        pso_move(x, v, params_.velocity_clamp);
        state_.values[i].reset();
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double value = ev(state_.positions[i]);
        state_.values[i] = value;
        if (value < state_.personal_best_values[i]) {
            state_.personal_best[i] = state_.positions[i];
            state_.personal_best_values[i] = value;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (state_.personal_best_values[i] < state_.global_best_value) {
            state_.global_best = state_.personal_best[i];
            state_.global_best_value = state_.personal_best_values[i];
        }
    }
}

}  // namespace dynas
