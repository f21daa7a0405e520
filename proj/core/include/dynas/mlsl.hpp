#pragma once

#include "dynas/optimizer.hpp"

namespace dynas {

/// Critical distance r_k of multi-level single linkage for `total_samples`
/// uniform points in the [-5, 5]^d box.
double mlsl_critical_distance(int dimension, std::int64_t total_samples, double sigma);

/// True when a known point with a strictly lower value lies within `radius`
/// of `candidate` (the MLSL start rule forbids a local search then).
bool mlsl_has_better_neighbor(const Sample& candidate, const std::vector<Sample>& samples,
                              const std::vector<Sample>& local_minima, double radius);

struct MlslState {
    /// All uniform samples in draw order.
    std::vector<Sample> samples;
    std::vector<Sample> local_minima;
    /// Indices into `samples` from which a local search was started, in order.
    std::vector<std::size_t> start_indices;
    std::vector<bool> started;
    std::vector<double> critical_distances;
    int level = 0;
};

/// Multi-level single linkage with Powell local searches.
class Mlsl final : public Optimizer {
public:
    Mlsl(const OptimizerConfig& config, int dimension);

    Algorithm algorithm() const override { return Algorithm::mlsl; }
    /// One level: 50d new samples, then local searches from every qualifying
    /// point of the reduced set.
    void step(BudgetedEvaluator& ev) override;
    bool is_finished() const override { return false; }
    void export_state(WarmStartState& ws) const override;

    const MlslState& state() const { return state_; }
    int samples_per_level() const { return params_.samples_per_dimension * dimension_; }

private:
    MlslParams params_;
    int dimension_;
    MlslState state_;
    Rng rng_;
};

}  // namespace dynas
