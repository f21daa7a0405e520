#include "dynas/bfgs.hpp"

#include <algorithm>
#include <cmath>

namespace dynas {

namespace {

// Minimizer of the cubic through (a, fa) with slope fpa, (b, fb) and (c, fc).
std::optional<double> cubic_minimizer(double a, double fa, double fpa, double b, double fb, double c,
                                      double fc) {
    const double db = b - a;
    const double dc = c - a;
    const double denom = (db * dc) * (db * dc) * (db - dc);
    if (denom == 0.0) return std::nullopt;
    const double r1 = fb - fa - fpa * db;
    const double r2 = fc - fa - fpa * dc;
    const double ca = (dc * dc * r1 - db * db * r2) / denom;
    const double cb = (-dc * dc * dc * r1 + db * db * db * r2) / denom;
    const double radical = cb * cb - 3.0 * ca * fpa;
    if (ca == 0.0 || radical < 0.0) return std::nullopt;
    const double xmin = a + (-cb + std::sqrt(radical)) / (3.0 * ca);
    if (!std::isfinite(xmin)) return std::nullopt;
    return xmin;
}

// Minimizer of the parabola through (a, fa) with slope fpa and (b, fb).
std::optional<double> quadratic_minimizer(double a, double fa, double fpa, double b, double fb) {
    const double db = b - a;
    if (db == 0.0) return std::nullopt;
    const double curvature = (fb - fa - fpa * db) / (db * db);
    if (curvature <= 0.0) return std::nullopt;
    const double xmin = a - fpa / (2.0 * curvature);
    if (!std::isfinite(xmin)) return std::nullopt;
    return xmin;
}

}  // namespace

Bfgs::Bfgs(const OptimizerConfig& config, int dimension) : params_(config.bfgs) {
    Rng rng(config.rng_seed);
    state_.x = uniform_in_box(dimension, rng);
    state_.inv_hessian = Matrix::Identity(dimension, dimension);
}

Bfgs::Bfgs(const OptimizerConfig& config, BfgsState initial) : params_(config.bfgs), state_(std::move(initial)) {
    const auto d = state_.x.size();
    if (state_.inv_hessian.size() == 0) state_.inv_hessian = Matrix::Identity(d, d);
    if (state_.inv_hessian.rows() != d || state_.inv_hessian.cols() != d) {
        throw UsageError("BfgsState: inverse Hessian does not match the dimension of x");
    }
}

void Bfgs::export_state(WarmStartState& ws) const {
    ws.inv_hessian = state_.inv_hessian;
    ws.recent_trajectory.assign(state_.recent_points.begin(), state_.recent_points.end());
}

void Bfgs::push_iterate(const Vector& x) {
    state_.recent_points.push_front(x);
    while (static_cast<int>(state_.recent_points.size()) > std::max(params_.history, 2)) {
        state_.recent_points.pop_back();
    }
}

Vector Bfgs::finite_difference_gradient(BudgetedEvaluator& ev, const Vector& x, double fx) const {
    static const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + root_eps * std::max(1.0, std::abs(x[i]));
        const double h = probe[i] - x[i];
        g[i] = (ev(probe) - fx) / h;
        probe[i] = x[i];
    }
    return g;
}

std::optional<Bfgs::LineSearchResult> Bfgs::line_search(BudgetedEvaluator& ev, const Vector& direction) const {
    const Vector& x = state_.x;
    const double phi0 = *state_.f;
    const double derphi0 = state_.gradient->dot(direction);
    if (!(derphi0 < 0.0)) return std::nullopt;

    const double c1 = params_.wolfe_c1;
    const double c2 = params_.wolfe_c2;

    auto phi = [&](double alpha) {
        const double v = ev(x + alpha * direction);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    Vector last_gradient;
    auto derphi = [&](double alpha, double phi_alpha) {
        last_gradient = finite_difference_gradient(ev, x + alpha * direction, phi_alpha);
        return last_gradient.dot(direction);
    };
    auto armijo_fails = [&](double alpha, double phi_alpha) { return phi_alpha > phi0 + c1 * alpha * derphi0; };
    auto curvature_holds = [&](double derphi_alpha) { return std::abs(derphi_alpha) <= -c2 * derphi0; };

    auto zoom = [&](double a_lo, double a_hi, double phi_lo, double phi_hi,
                    double derphi_lo) -> std::optional<LineSearchResult> {
        double phi_rec = phi0;
        double a_rec = 0.0;
        for (int i = 0; i <= params_.max_line_search_iterations; ++i) {
            const double dalpha = a_hi - a_lo;
            const double lo = std::min(a_lo, a_hi);
            const double hi = std::max(a_lo, a_hi);
            const double width = std::abs(dalpha);
            if (width == 0.0) return std::nullopt;

            std::optional<double> a_j;
            if (i > 0) {
                a_j = cubic_minimizer(a_lo, phi_lo, derphi_lo, a_hi, phi_hi, a_rec, phi_rec);
                if (a_j && (*a_j > hi - 0.2 * width || *a_j < lo + 0.2 * width)) a_j.reset();
            }
            if (!a_j) {
                a_j = quadratic_minimizer(a_lo, phi_lo, derphi_lo, a_hi, phi_hi);
                if (a_j && (*a_j > hi - 0.1 * width || *a_j < lo + 0.1 * width)) a_j.reset();
            }
            const double alpha = a_j.value_or(a_lo + 0.5 * dalpha);

            const double phi_j = phi(alpha);
            if (armijo_fails(alpha, phi_j) || phi_j >= phi_lo) {
                phi_rec = phi_hi;
                a_rec = a_hi;
                a_hi = alpha;
                phi_hi = phi_j;
            } else {
                const double derphi_j = derphi(alpha, phi_j);
                if (curvature_holds(derphi_j)) return LineSearchResult{alpha, phi_j, last_gradient};
                if (derphi_j * dalpha >= 0.0) {
                    phi_rec = phi_hi;
                    a_rec = a_hi;
                    a_hi = a_lo;
                    phi_hi = phi_lo;
                } else {
                    phi_rec = phi_lo;
                    a_rec = a_lo;
                }
                a_lo = alpha;
                phi_lo = phi_j;
                derphi_lo = derphi_j;
            }
        }
        return std::nullopt;
    };

    double alpha1 = 1.0;
    if (std::isfinite(state_.previous_f)) {
        const double guess = 1.01 * 2.0 * (phi0 - state_.previous_f) / derphi0;
        if (std::isfinite(guess) && guess > 0.0) alpha1 = std::min(1.0, guess);
    }

    double alpha0 = 0.0;
    double phi_a0 = phi0;
    double derphi_a0 = derphi0;
    for (int i = 0; i < params_.max_line_search_iterations; ++i) {
        if (alpha1 == 0.0) break;
        const double phi_a1 = phi(alpha1);
        if (armijo_fails(alpha1, phi_a1) || (i > 0 && phi_a1 >= phi_a0)) {
            return zoom(alpha0, alpha1, phi_a0, phi_a1, derphi_a0);
        }
        const double derphi_a1 = derphi(alpha1, phi_a1);
        if (curvature_holds(derphi_a1)) return LineSearchResult{alpha1, phi_a1, last_gradient};
        if (derphi_a1 >= 0.0) return zoom(alpha1, alpha0, phi_a1, phi_a0, derphi_a1);

        alpha0 = alpha1;
        alpha1 *= 2.0;
        phi_a0 = phi_a1;
        derphi_a0 = derphi_a1;
    }
    return std::nullopt;
}

void Bfgs::step(BudgetedEvaluator& ev) {
    if (state_.finished) return;
    const auto d = state_.x.size();

    if (!state_.f) {
        state_.f = ev(state_.x);
        if (state_.recent_points.empty()) push_iterate(state_.x);
        return;
    }
    if (!state_.gradient) {
        state_.gradient = finite_difference_gradient(ev, state_.x, *state_.f);
        if (state_.recent_points.empty()) push_iterate(state_.x);
        if (!std::isfinite(state_.previous_f)) state_.previous_f = *state_.f + state_.gradient->norm() / 2.0;
        return;
    }
    if (!std::isfinite(*state_.f) || state_.gradient->lpNorm<Eigen::Infinity>() <= params_.gradient_tolerance) {
        state_.finished = true;
        return;
    }

    Vector direction = -state_.inv_hessian * *state_.gradient;
    std::optional<LineSearchResult> result = line_search(ev, direction);
    if (!result) {
        ++state_.line_search_failures;
        state_.inv_hessian.setIdentity();
        direction = -*state_.gradient;
        result = line_search(ev, direction);
        if (!result) {
            ++state_.line_search_failures;
            state_.finished = true;
            return;
        }
    }

    const Vector s = result->alpha * direction;
    const Vector x_new = state_.x + s;
    const Vector y = result->gradient - *state_.gradient;
    const double ys = y.dot(s);
    if (ys > 0.0 && std::isfinite(ys)) {
        const double rho = 1.0 / ys;
        const Matrix identity = Matrix::Identity(d, d);
        const Matrix left = identity - rho * s * y.transpose();
        Matrix updated = left * state_.inv_hessian * left.transpose() + rho * s * s.transpose();
        state_.inv_hessian = 0.5 * (updated + updated.transpose());
    }

    state_.previous_f = *state_.f;
    state_.x = x_new;
    state_.f = result->f;
    state_.gradient = result->gradient;
    ++state_.iterations;
    push_iterate(state_.x);
}

}  // namespace dynas
