#pragma once

#include "dynas/bfgs.hpp"
#include "dynas/cmaes.hpp"
#include "dynas/de.hpp"
#include "dynas/optimizer.hpp"
#include "dynas/pso.hpp"
#include "dynas/warmstart_state.hpp"

#include <memory>
#include <string_view>

namespace dynas {

enum class WarmStartMode { point_only, full };

std::string_view to_string(WarmStartMode mode);
/// "point_only" or "full"; throws ConfigError otherwise.
WarmStartMode parse_warmstart_mode(std::string_view text);

struct WarmStartPolicy {
    WarmStartMode mode = WarmStartMode::full;
    /// n: number of recent BFGS steps averaged into sigma.
    int step_size_window = 10;
    /// eta: half-width of the hyperbox around the best point.
    double hyperbox_radius = 0.1;
    /// beta: scale of the inverse Hessian built from a CMA-ES state.
    double hessian_scale = 1.0;

    /// Throws ConfigError unless n >= 2, eta > 0 and beta > 0.
    void validate() const;
};

inline constexpr double kDefaultWarmStartSigma = 0.5;

/// Snapshot of a suspended optimizer. The best point comes from the
/// evaluator, which sees every evaluation. Throws UsageError before the
/// first evaluation.
WarmStartState extract(const Optimizer& optimizer, const BudgetedEvaluator& ev);

/// Mean distance between consecutive points of the first `window` entries of
/// `trajectory`. Returns 0 when fewer than two points exist.
double trajectory_step_size(const std::vector<Vector>& trajectory, int window);

/// Symmetrizes `m` and lifts eigenvalues below 1e-14 * max(1, largest) to that
/// floor. Returns the number of lifted eigenvalues.
int repair_spd(Matrix& m);

/// m / det(m)^(1/d), computed from the eigenvalues of the repaired matrix.
Matrix unit_determinant(const Matrix& m);

CmaesState warmstart_cmaes_from_bfgs(const WarmStartState& ws, const WarmStartPolicy& policy);
BfgsState warmstart_bfgs_from_cmaes(const WarmStartState& ws, const WarmStartPolicy& policy);
/// `config` supplies the swarm size and the RNG seed for the hyperbox draw.
PsoState warmstart_pso_from_mlsl(const WarmStartState& ws, const WarmStartPolicy& policy,
                                 const OptimizerConfig& config);
DeState warmstart_de_from_mlsl(const WarmStartState& ws, const WarmStartPolicy& policy,
                               const OptimizerConfig& config);
CmaesState warmstart_cmaes_from_mlsl(const WarmStartState& ws);

/// Fallback for pairs without a dedicated procedure.
std::unique_ptr<Optimizer> warmstart_generic(const WarmStartState& ws, const OptimizerConfig& target,
                                             const WarmStartPolicy& policy);

/// Builds A2 from the state left behind by an A1 of kind `source`.
std::unique_ptr<Optimizer> warm_start(Algorithm source, const WarmStartState& ws, const OptimizerConfig& target,
                                      const WarmStartPolicy& policy);

}  // namespace dynas
