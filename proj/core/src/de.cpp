#include "dynas/de.hpp"

#include <algorithm>
#include <cmath>

namespace dynas {

std::vector<bool> binomial_crossover_mask(Rng& rng, int dimension, double crossover_rate) {
    std::uniform_int_distribution<int> pick(0, dimension - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int forced = pick(rng);
    std::vector<bool> mask(static_cast<std::size_t>(dimension));
    for (int i = 0; i < dimension; ++i) mask[i] = unit(rng) < crossover_rate;
    mask[forced] = true;
    return mask;
}

De::De(const OptimizerConfig& config, int dimension) : params_(config.de), rng_(config.rng_seed) {
    const auto n = static_cast<std::size_t>(params_.population_per_dimension * dimension);
    state_.population.reserve(n);
    for (std::size_t i = 0; i < n; ++i) state_.population.push_back(uniform_in_box(dimension, rng_));
    state_.values.assign(n, std::nullopt);
}

De::De(const OptimizerConfig& config, DeState initial)
    : params_(config.de), state_(std::move(initial)), rng_(config.rng_seed) {
    if (state_.population.size() < 4) {
        throw UsageError("DeState: DE/best/1 needs at least 4 members");
    }
    state_.values.resize(state_.population.size());
}

void De::export_state(WarmStartState& ws) const {
    std::vector<Sample> population;
    for (std::size_t i = 0; i < state_.population.size(); ++i) {
        if (state_.values[i]) population.push_back({state_.population[i], *state_.values[i]});
    }
    if (!population.empty()) ws.population = std::move(population);
}

void De::step(BudgetedEvaluator& ev) {
    if (state_.finished) return;
    const std::size_t n = state_.population.size();
    const int d = static_cast<int>(state_.population.front().size());

    if (!state_.initialized) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!state_.values[i]) state_.values[i] = ev(state_.population[i]);
        }
        state_.best = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (*state_.values[i] < *state_.values[state_.best]) state_.best = i;
        }
        state_.initialized = true;
        return;
    }

    std::uniform_real_distribution<double> dither(params_.mutation_min, params_.mutation_max);
    const double f = fixed_f_.value_or(dither(rng_));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> box(kBoxLower, kBoxUpper);

    for (std::size_t j = 0; j < n; ++j) {
        std::size_t r1 = pick(rng_);
        while (r1 == j) r1 = pick(rng_);
        std::size_t r2 = pick(rng_);
        while (r2 == j || r2 == r1) r2 = pick(rng_);

        const Vector mutant =
            state_.population[state_.best] + f * (state_.population[r1] - state_.population[r2]);
        const std::vector<bool> mask = binomial_crossover_mask(rng_, d, params_.crossover_rate);
        Vector trial = state_.population[j];
        for (int k = 0; k < d; ++k) {
            if (!mask[k]) continue;
            trial[k] = mutant[k];
            if (trial[k] < kBoxLower || trial[k] > kBoxUpper) trial[k] = box(rng_);
        }

        const double value = ev(trial);
        if (value <= *state_.values[j]) {
            state_.population[j] = std::move(trial);
            state_.values[j] = value;
            if (value < *state_.values[state_.best]) state_.best = j;
        }
    }
    ++state_.generation;

    double mean = 0.0;
    for (const auto& v : state_.values) mean += *v;
    mean /= static_cast<double>(n);
    double variance = 0.0;
    for (const auto& v : state_.values) variance += (*v - mean) * (*v - mean);
    const double spread = std::sqrt(variance / static_cast<double>(n));
    if (spread <= params_.tolerance * std::abs(mean)) state_.finished = true;
}

}  // namespace dynas
