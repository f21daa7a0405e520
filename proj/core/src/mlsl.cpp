#include "dynas/mlsl.hpp"

#include "dynas/powell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dynas {

double mlsl_critical_distance(int dimension, std::int64_t total_samples, double sigma) {
    const double d = dimension;
    const double kn = static_cast<double>(total_samples);
    const double volume = std::pow(kBoxUpper - kBoxLower, d);
    const double inner = std::tgamma(1.0 + d / 2.0) * volume * sigma * std::log(kn) / kn;
    return std::pow(inner, 1.0 / d) / std::sqrt(std::numbers::pi);
}

bool mlsl_has_better_neighbor(const Sample& candidate, const std::vector<Sample>& samples,
                              const std::vector<Sample>& local_minima, double radius) {
    const double r2 = radius * radius;
    auto blocks = [&](const Sample& other) {
        return other.value < candidate.value && (other.point - candidate.point).squaredNorm() <= r2;
    };
    return std::any_of(samples.begin(), samples.end(), blocks) ||
           std::any_of(local_minima.begin(), local_minima.end(), blocks);
}

Mlsl::Mlsl(const OptimizerConfig& config, int dimension)
    : params_(config.mlsl), dimension_(dimension), rng_(config.rng_seed) {}

void Mlsl::export_state(WarmStartState& ws) const {
    std::vector<Sample> population = state_.local_minima;
    std::vector<std::size_t> order(state_.samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return state_.samples[a].value < state_.samples[b].value; });
    const auto reduced = static_cast<std::size_t>(
        std::ceil(params_.reduced_fraction * static_cast<double>(state_.samples.size())));
    for (std::size_t i = 0; i < std::min(reduced, order.size()); ++i) population.push_back(state_.samples[order[i]]);
    if (!population.empty()) ws.population = std::move(population);
}

void Mlsl::step(BudgetedEvaluator& ev) {
    const std::size_t level_target = static_cast<std::size_t>(state_.level + 1) * samples_per_level();
    while (state_.samples.size() < level_target) {
        Vector x = uniform_in_box(dimension_, rng_);
        const double value = ev(x);
        state_.samples.push_back({std::move(x), value});
        state_.started.push_back(false);
    }

    const auto total = static_cast<std::int64_t>(state_.samples.size());
    const double radius = mlsl_critical_distance(dimension_, total, params_.critical_sigma);
    state_.critical_distances.push_back(radius);

    std::vector<std::size_t> order(state_.samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return state_.samples[a].value < state_.samples[b].value; });
    const auto reduced = static_cast<std::size_t>(std::ceil(params_.reduced_fraction * static_cast<double>(total)));

    const auto cap = std::max<EvalCount>(
        1, static_cast<EvalCount>(params_.local_budget_fraction * static_cast<double>(ev.budget())));
    ++state_.level;
    for (std::size_t r = 0; r < std::min(reduced, order.size()); ++r) {
        const std::size_t index = order[r];
        if (state_.started[index]) continue;
        const Sample& candidate = state_.samples[index];
        if (mlsl_has_better_neighbor(candidate, state_.samples, state_.local_minima, radius)) continue;

        state_.started[index] = true;
        state_.start_indices.push_back(index);
        const PowellResult local = powell_minimize(candidate.point, ev, params_.powell_ftol, cap, candidate.value);
        state_.local_minima.push_back({local.x, local.f});
    }
}

}  // namespace dynas
