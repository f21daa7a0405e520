#pragma once

#include "dynas/problems.hpp"
#include "dynas/tracing.hpp"

#include <optional>
#include <vector>

namespace dynas {

struct Sample {
    Vector point;
    double value = 0.0;
};

/// Algorithm-agnostic information extracted from a suspended optimizer.
/// best_point/best_value are always present; everything else only when the
/// source algorithm has it.
struct WarmStartState {
    Vector best_point;
    double best_value = 0.0;
    /// Most recent first (x_0 is the last iterate before the switch).
    std::vector<Vector> recent_trajectory;
    std::optional<Matrix> inv_hessian;
    std::optional<Matrix> covariance;
    std::optional<double> sigma;
    std::optional<Vector> mean;
    std::optional<std::vector<Sample>> population;
    EvalCount evaluations_spent = 0;
};

}  // namespace dynas
