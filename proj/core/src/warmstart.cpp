#include "dynas/warmstart.hpp"

#include "dynas/log.hpp"
#include "dynas/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace dynas {

namespace {

std::vector<Vector> hyperbox_points(const Vector& center, double radius, std::size_t count, Rng& rng) {
    const auto d = center.size();
    const Vector lo = (center.array() - radius).cwiseMax(kBoxLower);
    const Vector hi = (center.array() + radius).cwiseMin(kBoxUpper);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vector> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector x(d);
        for (Eigen::Index k = 0; k < d; ++k) x[k] = lo[k] + (hi[k] - lo[k]) * unit(rng);
        points.push_back(std::move(x));
    }
    return points;
}

Vector uniform_velocity(Eigen::Index d, double radius, Rng& rng) {
    std::uniform_real_distribution<double> u(-radius, radius);
    Vector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = u(rng);
    return v;
}

// Known members first (best first), truncated to `size`; the best point is
// guaranteed a slot. Missing members are drawn in the hyperbox around it.
std::vector<Sample> carried_members(const WarmStartState& ws, std::size_t size) {
    std::vector<Sample> members;
    if (ws.population) {
        members = *ws.population;
        std::stable_sort(members.begin(), members.end(),
                         [](const Sample& a, const Sample& b) { return a.value < b.value; });
    }
    if (members.empty() || ws.best_value < members.front().value) {
        members.insert(members.begin(), Sample{ws.best_point, ws.best_value});
    }
    if (members.size() > size) members.resize(size);
    return members;
}

double population_spread(const std::vector<Sample>& population) {
    if (population.size() < 2) return 0.0;
    const auto d = population.front().point.size();
    Vector mean = Vector::Zero(d);
    for (const auto& s : population) mean += s.point;
    mean /= static_cast<double>(population.size());
    double variance = 0.0;
    for (const auto& s : population) variance += (s.point - mean).squaredNorm();
    variance /= static_cast<double>(population.size() - 1) * static_cast<double>(d);
    return std::sqrt(variance);
}

void require_best_point(const WarmStartState& ws) {
    if (ws.best_point.size() == 0) throw UsageError("warm start needs a best point");
}

}  // namespace

std::string_view to_string(WarmStartMode mode) {
    return mode == WarmStartMode::full ? "full" : "point_only";
}

WarmStartMode parse_warmstart_mode(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    std::replace(lower.begin(), lower.end(), '-', '_');
    if (lower == "full") return WarmStartMode::full;
    if (lower == "point_only") return WarmStartMode::point_only;
    throw ConfigError("unknown warm-start mode '" + std::string(text) + "' (expected point_only or full)");
}

void WarmStartPolicy::validate() const {
    if (step_size_window < 2) throw ConfigError("warm-start step_size_window must be >= 2");
    if (!(hyperbox_radius > 0.0)) throw ConfigError("warm-start hyperbox_radius must be > 0");
    if (!(hessian_scale > 0.0)) throw ConfigError("warm-start hessian_scale must be > 0");
}

WarmStartState extract(const Optimizer& optimizer, const BudgetedEvaluator& ev) {
    if (!ev.has_best()) throw UsageError("extract: the optimizer has not evaluated anything yet");
    WarmStartState ws;
    optimizer.export_state(ws);
    ws.best_point = ev.best_point();
    ws.best_value = ev.best_value();
    ws.evaluations_spent = ev.evals_used();
    if (ws.inv_hessian && repair_spd(*ws.inv_hessian) > 0) {
        log_warning("extract: inverse Hessian was not positive definite; eigenvalues floored");
    }
    if (ws.covariance && repair_spd(*ws.covariance) > 0) {
        log_warning("extract: covariance was not positive definite; eigenvalues floored");
    }
    return ws;
}

double trajectory_step_size(const std::vector<Vector>& trajectory, int window) {
    const std::size_t points = std::min(trajectory.size(), static_cast<std::size_t>(std::max(window, 0)));
    if (points < 2) return 0.0;
    // Running mean: equal steps give back the step bit for bit.
    double mean = 0.0;
    for (std::size_t j = 0; j + 1 < points; ++j) {
        mean += ((trajectory[j] - trajectory[j + 1]).norm() - mean) / static_cast<double>(j + 1);
    }
    return mean;
}

int repair_spd(Matrix& m) {
    m = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    Vector values = solver.eigenvalues();
    const double largest = values.cwiseAbs().maxCoeff();
    const double floor = 1e-14 * std::max(1.0, std::isfinite(largest) ? largest : 1.0);
    int lifted = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!(values[i] >= floor)) {
            values[i] = floor;
            ++lifted;
        }
    }
    if (lifted > 0) {
        const Matrix& b = solver.eigenvectors();
        m = b * values.asDiagonal() * b.transpose();
        m = 0.5 * (m + m.transpose());
    }
    return lifted;
}

Matrix unit_determinant(const Matrix& m) {
    Matrix repaired = m;
    if (repair_spd(repaired) > 0) log_warning("warm start: singular inverse Hessian repaired");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(repaired);
    const Vector& values = solver.eigenvalues();
    const double mean_log = values.array().log().mean();
    const Vector scaled = (values.array().log() - mean_log).exp();
    Matrix c = solver.eigenvectors() * scaled.asDiagonal() * solver.eigenvectors().transpose();
    return 0.5 * (c + c.transpose());
}

CmaesState warmstart_cmaes_from_bfgs(const WarmStartState& ws, const WarmStartPolicy& policy) {
    require_best_point(ws);
    policy.validate();
    const auto d = ws.best_point.size();
    CmaesState state = CmaesState::initial(ws.best_point, kDefaultWarmStartSigma);
    if (policy.mode == WarmStartMode::point_only) return state;

    if (!ws.inv_hessian) throw UsageError("warmstart_cmaes_from_bfgs: no inverse Hessian in the state");
    state.covariance = unit_determinant(*ws.inv_hessian);
    const double sigma = trajectory_step_size(ws.recent_trajectory, policy.step_size_window);
    if (sigma > 0.0 && std::isfinite(sigma)) {
        state.sigma = sigma;
    } else {
        log_warning("warm start: degenerate BFGS trajectory, using default sigma");
    }
    state.path_sigma = Vector::Zero(d);
    state.path_c = Vector::Zero(d);
    return state;
}

BfgsState warmstart_bfgs_from_cmaes(const WarmStartState& ws, const WarmStartPolicy& policy) {
    require_best_point(ws);
    policy.validate();
    const auto d = ws.best_point.size();
    BfgsState state;
    state.x = ws.best_point;
    state.f = ws.best_value;
    state.inv_hessian = Matrix::Identity(d, d);
    if (policy.mode == WarmStartMode::full) {
        if (!ws.covariance || !ws.sigma) throw UsageError("warmstart_bfgs_from_cmaes: no CMA-ES state present");
        state.inv_hessian = policy.hessian_scale * (*ws.sigma) * (*ws.sigma) * (*ws.covariance);
    }
    state.recent_points.push_front(state.x);
    return state;
}

PsoState warmstart_pso_from_mlsl(const WarmStartState& ws, const WarmStartPolicy& policy,
                                 const OptimizerConfig& config) {
    require_best_point(ws);
    policy.validate();
    const auto n = static_cast<std::size_t>(config.pso.swarm_size);
    Rng rng(derive_seed(config.rng_seed, "warmstart"));
    PsoState state;
    state.positions = hyperbox_points(ws.best_point, policy.hyperbox_radius, n, rng);
    state.positions.front() = ws.best_point;
    state.values.assign(n, std::nullopt);
    state.values.front() = ws.best_value;
    for (std::size_t i = 0; i < n; ++i) {
        state.velocities.push_back(uniform_velocity(ws.best_point.size(), policy.hyperbox_radius, rng));
    }
    return state;
}

DeState warmstart_de_from_mlsl(const WarmStartState& ws, const WarmStartPolicy& policy,
                               const OptimizerConfig& config) {
    require_best_point(ws);
    policy.validate();
    const auto n =
        static_cast<std::size_t>(config.de.population_per_dimension * static_cast<int>(ws.best_point.size()));
    Rng rng(derive_seed(config.rng_seed, "warmstart"));
    DeState state;
    state.population = hyperbox_points(ws.best_point, policy.hyperbox_radius, n, rng);
    state.population.front() = ws.best_point;
    state.values.assign(n, std::nullopt);
    state.values.front() = ws.best_value;
    return state;
}

CmaesState warmstart_cmaes_from_mlsl(const WarmStartState& ws) {
    require_best_point(ws);
    return CmaesState::initial(ws.best_point, kDefaultWarmStartSigma);
}

std::unique_ptr<Optimizer> warmstart_generic(const WarmStartState& ws, const OptimizerConfig& target,
                                             const WarmStartPolicy& policy) {
    require_best_point(ws);
    policy.validate();
    const auto d = ws.best_point.size();
    Rng rng(derive_seed(target.rng_seed, "warmstart"));

    switch (target.algorithm) {
        case Algorithm::bfgs: {
            BfgsState state;
            state.x = ws.best_point;
            state.f = ws.best_value;
            state.inv_hessian = Matrix::Identity(d, d);
            state.recent_points.push_front(state.x);
            return std::make_unique<Bfgs>(target, std::move(state));
        }
        case Algorithm::cmaes: {
            double sigma = kDefaultWarmStartSigma;
            if (ws.population) {
                const double spread = population_spread(*ws.population);
                if (spread > 0.0 && std::isfinite(spread)) sigma = 0.5 * spread;
            }
            return std::make_unique<Cmaes>(target, CmaesState::initial(ws.best_point, sigma));
        }
        case Algorithm::pso: {
            const auto n = static_cast<std::size_t>(target.pso.swarm_size);
            const auto carried = carried_members(ws, n);
            PsoState state;
            for (const auto& s : carried) {
                state.positions.push_back(s.point);
                state.values.emplace_back(s.value);
                state.velocities.push_back(Vector::Zero(d));
            }
            for (auto& x : hyperbox_points(ws.best_point, policy.hyperbox_radius, n - carried.size(), rng)) {
                state.positions.push_back(std::move(x));
                state.values.emplace_back(std::nullopt);
                state.velocities.push_back(uniform_velocity(d, policy.hyperbox_radius, rng));
            }
            return std::make_unique<Pso>(target, std::move(state));
        }
        case Algorithm::de: {
            const auto n = static_cast<std::size_t>(target.de.population_per_dimension * static_cast<int>(d));
            const auto carried = carried_members(ws, n);
            DeState state;
            for (const auto& s : carried) {
                state.population.push_back(s.point);
                state.values.emplace_back(s.value);
            }
            for (auto& x : hyperbox_points(ws.best_point, policy.hyperbox_radius, n - carried.size(), rng)) {
                state.population.push_back(std::move(x));
                state.values.emplace_back(std::nullopt);
            }
            return std::make_unique<De>(target, std::move(state));
        }
        case Algorithm::mlsl:
            // MLSL samples the whole box by design; nothing to inherit.
            return make_optimizer(target, static_cast<int>(d));
    }
    throw ConfigError("unknown target algorithm");
}

std::unique_ptr<Optimizer> warm_start(Algorithm source, const WarmStartState& ws, const OptimizerConfig& target,
                                      const WarmStartPolicy& policy) {
    target.validate();
    policy.validate();
    if (source == Algorithm::bfgs && target.algorithm == Algorithm::cmaes) {
        return std::make_unique<Cmaes>(target, warmstart_cmaes_from_bfgs(ws, policy));
    }
    if (source == Algorithm::cmaes && target.algorithm == Algorithm::bfgs) {
        return std::make_unique<Bfgs>(target, warmstart_bfgs_from_cmaes(ws, policy));
    }
    if (source == Algorithm::mlsl) {
        switch (target.algorithm) {
            case Algorithm::pso: return std::make_unique<Pso>(target, warmstart_pso_from_mlsl(ws, policy, target));
            case Algorithm::de: return std::make_unique<De>(target, warmstart_de_from_mlsl(ws, policy, target));
            case Algorithm::cmaes: return std::make_unique<Cmaes>(target, warmstart_cmaes_from_mlsl(ws));
            default: break;
        }
    }
    return warmstart_generic(ws, target, policy);
}

}  // namespace dynas
