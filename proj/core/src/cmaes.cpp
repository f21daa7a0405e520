#include "dynas/cmaes.hpp"

#include "dynas/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dynas {

int default_cmaes_lambda(int dimension) {
    return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dimension))));
}

CmaesStrategy CmaesStrategy::standard(int dimension, int lambda) {
    CmaesStrategy s;
    const double n = dimension;
    s.dimension = dimension;
    s.lambda = lambda > 0 ? lambda : default_cmaes_lambda(dimension);
    s.mu = s.lambda / 2;

    s.weights.resize(s.mu);
    for (int i = 0; i < s.mu; ++i) {
        s.weights[i] = std::log((s.lambda + 1.0) / 2.0) - std::log(i + 1.0);
    }
    s.weights /= s.weights.sum();
    s.mu_eff = 1.0 / s.weights.squaredNorm();

    s.c_sigma = (s.mu_eff + 2.0) / (n + s.mu_eff + 5.0);
    s.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((s.mu_eff - 1.0) / (n + 1.0)) - 1.0) + s.c_sigma;
    s.c_c = (4.0 + s.mu_eff / n) / (n + 4.0 + 2.0 * s.mu_eff / n);
    s.c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + s.mu_eff);
    s.c_mu = std::min(1.0 - s.c_1, 2.0 * (s.mu_eff - 2.0 + 1.0 / s.mu_eff) / ((n + 2.0) * (n + 2.0) + s.mu_eff));
    s.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    return s;
}

CmaesState CmaesState::initial(Vector mean, double sigma) {
    const auto d = mean.size();
    CmaesState s;
    s.mean = std::move(mean);
    s.sigma = sigma;
    s.covariance = Matrix::Identity(d, d);
    s.path_sigma = Vector::Zero(d);
    s.path_c = Vector::Zero(d);
    s.basis = Matrix::Identity(d, d);
    s.axis_lengths = Vector::Ones(d);
    return s;
}

Cmaes::Cmaes(const OptimizerConfig& config, int dimension)
    : strategy_(CmaesStrategy::standard(dimension, config.cmaes.lambda)), rng_(config.rng_seed) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector mean(dimension);
    for (int i = 0; i < dimension; ++i) mean[i] = unit(rng_);
    state_ = CmaesState::initial(std::move(mean), config.cmaes.sigma0);
}

Cmaes::Cmaes(const OptimizerConfig& config, CmaesState initial)
    : strategy_(CmaesStrategy::standard(static_cast<int>(initial.mean.size()), config.cmaes.lambda)),
      state_(std::move(initial)),
      rng_(config.rng_seed) {
    const auto d = state_.mean.size();
    if (state_.covariance.rows() != d || state_.covariance.cols() != d) {
        throw UsageError("CmaesState: covariance does not match the dimension of the mean");
    }
    if (state_.path_sigma.size() != d) state_.path_sigma = Vector::Zero(d);
    if (state_.path_c.size() != d) state_.path_c = Vector::Zero(d);
    update_eigensystem();
}

void Cmaes::export_state(WarmStartState& ws) const {
    ws.mean = state_.mean;
    ws.sigma = state_.sigma;
    ws.covariance = state_.covariance;
}

void Cmaes::update_eigensystem() {
    Matrix& c = state_.covariance;
    c = 0.5 * (c + c.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(c);
    Vector eigenvalues = solver.eigenvalues();
    const double max_eig = eigenvalues.maxCoeff();
    const double floor = 1e-14 * max_eig;
    if (!(eigenvalues.minCoeff() > floor) && max_eig > 0.0) {
        ++repairs_;
        log_warning("CMA-ES covariance is not numerically positive definite; flooring eigenvalues");
        eigenvalues = eigenvalues.cwiseMax(floor);
        c = solver.eigenvectors() * eigenvalues.asDiagonal() * solver.eigenvectors().transpose();
        c = 0.5 * (c + c.transpose());
    }
    state_.basis = solver.eigenvectors();
    state_.axis_lengths = eigenvalues.cwiseMax(0.0).cwiseSqrt();
}

std::vector<Vector> Cmaes::sample_offspring(std::vector<Vector>* steps) {
    const auto d = state_.mean.size();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vector> offspring;
    offspring.reserve(strategy_.lambda);
    if (steps) steps->clear();
    Vector z(d);
    for (int k = 0; k < strategy_.lambda; ++k) {
        for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(rng_);
        Vector y = state_.basis * state_.axis_lengths.cwiseProduct(z);
        offspring.push_back(state_.mean + state_.sigma * y);
        if (steps) steps->push_back(std::move(y));
    }
    return offspring;
}

void Cmaes::step(BudgetedEvaluator& ev) {
    if (state_.finished) return;
    const auto& s = strategy_;
    const auto d = state_.mean.size();

    update_eigensystem();
    std::vector<Vector> steps;
    const std::vector<Vector> offspring = sample_offspring(&steps);
    std::vector<double> values(offspring.size());
    for (std::size_t k = 0; k < offspring.size(); ++k) values[k] = ev(offspring[k]);

    std::vector<int> order(offspring.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });

    Vector y_w = Vector::Zero(d);
    for (int i = 0; i < s.mu; ++i) y_w += s.weights[i] * steps[order[i]];

    state_.mean += state_.sigma * y_w;

    const Vector inv_sqrt_y = state_.basis * (state_.basis.transpose() * y_w).cwiseQuotient(
                                                 state_.axis_lengths.cwiseMax(1e-300));
    state_.path_sigma = (1.0 - s.c_sigma) * state_.path_sigma +
                        std::sqrt(s.c_sigma * (2.0 - s.c_sigma) * s.mu_eff) * inv_sqrt_y;

    const double ps_norm = state_.path_sigma.norm();
    const double correction = std::sqrt(1.0 - std::pow(1.0 - s.c_sigma, 2.0 * (state_.generation + 1)));
    const bool h_sigma = ps_norm / correction / s.chi_n < 1.4 + 2.0 / (d + 1.0);

    state_.path_c = (1.0 - s.c_c) * state_.path_c +
                    (h_sigma ? std::sqrt(s.c_c * (2.0 - s.c_c) * s.mu_eff) : 0.0) * y_w;

    Matrix rank_mu = Matrix::Zero(d, d);
    for (int i = 0; i < s.mu; ++i) {
        const Vector& y = steps[order[i]];
        rank_mu.noalias() += s.weights[i] * y * y.transpose();
    }
    const double delta_h = h_sigma ? 0.0 : s.c_c * (2.0 - s.c_c);
    state_.covariance = (1.0 - s.c_1 - s.c_mu) * state_.covariance +
                        s.c_1 * (state_.path_c * state_.path_c.transpose() + delta_h * state_.covariance) +
                        s.c_mu * rank_mu;
    state_.covariance = 0.5 * (state_.covariance + state_.covariance.transpose());

    state_.sigma *= std::exp((s.c_sigma / s.d_sigma) * (ps_norm / s.chi_n - 1.0));
    ++state_.generation;

    const double max_axis = state_.axis_lengths.maxCoeff();
    const double min_axis = state_.axis_lengths.minCoeff();
    const double scale = std::max(1.0, state_.mean.lpNorm<Eigen::Infinity>());
    const bool degenerate = !std::isfinite(state_.sigma) || !state_.mean.allFinite() ||
                            !state_.covariance.allFinite() || state_.sigma * max_axis < 1e-15 * scale ||
                            (min_axis > 0.0 ? (max_axis / min_axis) * (max_axis / min_axis) > 1e14 : true);
    if (degenerate) state_.finished = true;
}

}  // namespace dynas
