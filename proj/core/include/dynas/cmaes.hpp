#pragma once

#include "dynas/optimizer.hpp"

namespace dynas {

/// Strategy constants of the (mu/mu_w, lambda)-CMA-ES with the standard
/// tutorial settings and positive recombination weights only.
struct CmaesStrategy {
    int dimension = 0;
    int lambda = 0;
    int mu = 0;
    Vector weights;
    double mu_eff = 0.0;
    double c_sigma = 0.0;
    double d_sigma = 0.0;
    double c_c = 0.0;
    double c_1 = 0.0;
    double c_mu = 0.0;
    double chi_n = 0.0;  // E||N(0, I)||

    static CmaesStrategy standard(int dimension, int lambda = 0);
};

/// 4 + floor(3 ln d).
int default_cmaes_lambda(int dimension);

struct CmaesState {
    Vector mean;
    double sigma = 0.5;
    Matrix covariance;
    Vector path_sigma;
    Vector path_c;
    /// Eigendecomposition of the covariance: C = B diag(D^2) B^T.
    Matrix basis;
    Vector axis_lengths;
    int generation = 0;
    bool finished = false;

    /// Zero paths, identity covariance, mean and sigma as given.
    static CmaesState initial(Vector mean, double sigma);
};

class Cmaes final : public Optimizer {
public:
    /// Cold start: mean uniform in [0, 1)^d, sigma = sigma0, C = I.
    Cmaes(const OptimizerConfig& config, int dimension);
    Cmaes(const OptimizerConfig& config, CmaesState initial);

    Algorithm algorithm() const override { return Algorithm::cmaes; }
    void step(BudgetedEvaluator& ev) override;
    bool is_finished() const override { return state_.finished; }
    void export_state(WarmStartState& ws) const override;

    const CmaesState& state() const { return state_; }
    const CmaesStrategy& strategy() const { return strategy_; }

    /// Draws lambda offspring mean + sigma B D z without evaluating them.
    std::vector<Vector> sample_offspring(std::vector<Vector>* steps = nullptr);

    /// Number of eigenvalue repairs performed so far.
    int repairs() const { return repairs_; }

private:
    void update_eigensystem();

    CmaesStrategy strategy_;
    CmaesState state_;
    Rng rng_;
    int repairs_ = 0;
};

}  // namespace dynas
