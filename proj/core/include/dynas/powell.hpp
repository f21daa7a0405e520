#pragma once

#include "dynas/problems.hpp"
#include "dynas/tracing.hpp"

#include <functional>
#include <optional>

namespace dynas {

using Objective = std::function<double(const Vector&)>;
using ScalarObjective = std::function<double(double)>;

struct LineMinimum {
    double alpha = 0.0;
    double value = 0.0;
};

/// Brackets a minimum of `phi` starting from (0, 1) and refines it with
/// Brent's method to relative tolerance `tol`. `phi0` is phi(0) when known.
LineMinimum brent_line_minimize(const ScalarObjective& phi, double tol, std::optional<double> phi0 = {});

struct PowellResult {
    Vector x;
    double f = 0.0;
    EvalCount evaluations = 0;
    int iterations = 0;
    /// True when the local evaluation cap ended the search.
    bool capped = false;
};

struct PowellOptions {
    double f_tol = 1e-8;
    /// Relative tolerance of each line minimization (scipy: xtol * 100).
    double line_tol = 1e-2;
    /// Upper bound on objective calls; 0 means unlimited.
    EvalCount max_evaluations = 0;
};

/// Powell's conjugate-direction method. Stops when an iteration improves f by
/// less than f_tol relatively, or when the evaluation cap is hit. StopRequested
/// from the objective propagates to the caller.
PowellResult powell_minimize(const Objective& f, const Vector& x0, const PowellOptions& options,
                             std::optional<double> f0 = {});

/// Same, routed through a BudgetedEvaluator with a per-invocation cap.
PowellResult powell_minimize(const Vector& x0, BudgetedEvaluator& ev, double f_tol, EvalCount max_evaluations,
                             std::optional<double> f0 = {});

}  // namespace dynas
