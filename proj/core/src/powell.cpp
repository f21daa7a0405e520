#include "dynas/powell.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace dynas {

namespace {

constexpr double kGold = 1.618034;
constexpr double kGoldenSection = 0.3819660;
constexpr double kVerySmall = 1e-21;
constexpr double kMinTol = 1e-11;
constexpr double kGrowLimit = 110.0;
constexpr int kMaxBracketIterations = 1000;
constexpr int kMaxBrentIterations = 500;

struct CapReached {};

struct Bracket {
    double xa, xb, xc;
    double fa, fb, fc;
};

Bracket bracket_minimum(const ScalarObjective& phi, std::optional<double> phi0) {
    double xa = 0.0;
    double xb = 1.0;
    double fa = phi0 ? *phi0 : phi(xa);
    double fb = phi(xb);
    if (fa < fb) {
        std::swap(xa, xb);
        std::swap(fa, fb);
    }
    double xc = xb + kGold * (xb - xa);
    double fc = phi(xc);
    int iterations = 0;
    while (fc < fb) {
        const double tmp1 = (xb - xa) * (fb - fc);
        const double tmp2 = (xb - xc) * (fb - fa);
        const double val = tmp2 - tmp1;
        const double denom = std::abs(val) < kVerySmall ? 2.0 * kVerySmall : 2.0 * val;
        double w = xb - ((xb - xc) * tmp2 - (xb - xa) * tmp1) / denom;
        const double wlim = xb + kGrowLimit * (xc - xb);
        if (++iterations > kMaxBracketIterations) break;
        double fw = 0.0;
        if ((w - xc) * (xb - w) > 0.0) {
            fw = phi(w);
            if (fw < fc) {
                return {xb, w, xc, fb, fw, fc};
            }
            if (fw > fb) {
                return {xa, xb, w, fa, fb, fw};
            }
            w = xc + kGold * (xc - xb);
            fw = phi(w);
        } else if ((w - wlim) * (wlim - xc) >= 0.0) {
            w = wlim;
            fw = phi(w);
        } else if ((w - wlim) * (xc - w) > 0.0) {
            fw = phi(w);
            if (fw < fc) {
                xb = xc;
                xc = w;
                w = xc + kGold * (xc - xb);
                fb = fc;
                fc = fw;
                fw = phi(w);
            }
        } else {
            w = xc + kGold * (xc - xb);
            fw = phi(w);
        }
        xa = xb;
        xb = xc;
        xc = w;
        fa = fb;
        fb = fc;
        fc = fw;
    }
    return {xa, xb, xc, fa, fb, fc};
}

}  // namespace

LineMinimum brent_line_minimize(const ScalarObjective& phi, double tol, std::optional<double> phi0) {
    const Bracket br = bracket_minimum(phi, phi0);

    double x = br.xb;
    double w = x;
    double v = x;
    double fx = br.fb;
    double fw = fx;
    double fv = fx;
    double a = std::min(br.xa, br.xc);
    double b = std::max(br.xa, br.xc);
    double deltax = 0.0;
    double rat = 0.0;

    for (int iter = 0; iter < kMaxBrentIterations; ++iter) {
        const double tol1 = tol * std::abs(x) + kMinTol;
        const double tol2 = 2.0 * tol1;
        const double xmid = 0.5 * (a + b);
        if (std::abs(x - xmid) < (tol2 - 0.5 * (b - a))) break;

        if (std::abs(deltax) <= tol1) {
            deltax = x >= xmid ? a - x : b - x;
            rat = kGoldenSection * deltax;
        } else {
            const double tmp1 = (x - w) * (fx - fv);
            double tmp2 = (x - v) * (fx - fw);
            double p = (x - v) * tmp2 - (x - w) * tmp1;
            tmp2 = 2.0 * (tmp2 - tmp1);
            if (tmp2 > 0.0) p = -p;
            tmp2 = std::abs(tmp2);
            const double dx_temp = deltax;
            deltax = rat;
            if (p > tmp2 * (a - x) && p < tmp2 * (b - x) && std::abs(p) < std::abs(0.5 * tmp2 * dx_temp)) {
                rat = p / tmp2;
                const double u = x + rat;
                if ((u - a) < tol2 || (b - u) < tol2) rat = xmid - x >= 0.0 ? tol1 : -tol1;
            } else {
                deltax = x >= xmid ? a - x : b - x;
                rat = kGoldenSection * deltax;
            }
        }

        const double u = std::abs(rat) < tol1 ? x + (rat >= 0.0 ? tol1 : -tol1) : x + rat;
        const double fu = phi(u);
        if (fu > fx) {
            if (u < x) {
                a = u;
            } else {
                b = u;
            }
            if (fu <= fw || w == x) {
                v = w;
                w = u;
                fv = fw;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        } else {
            if (u >= x) {
                a = x;
            } else {
                b = x;
            }
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        }
    }
    return {x, fx};
}

PowellResult powell_minimize(const Objective& f, const Vector& x0, const PowellOptions& options,
                             std::optional<double> f0) {
    PowellResult result;
    result.x = x0;
    result.f = std::numeric_limits<double>::infinity();

    // Every call is counted and the best point seen is kept, so a capped
    // search still reports its incumbent.
    auto objective = [&](const Vector& x) {
        if (options.max_evaluations > 0 && result.evaluations >= options.max_evaluations) throw CapReached{};
        ++result.evaluations;
        const double value = f(x);
        if (value < result.f) {
            result.f = value;
            result.x = x;
        }
        return value;
    };

    const auto d = x0.size();
    try {
        Vector x = x0;
        double fval = 0.0;
        if (f0) {
            fval = *f0;
            result.f = fval;
        } else {
            fval = objective(x);
        }
        Matrix directions = Matrix::Identity(d, d);
        Vector x_start = x;

        auto line_search = [&](Vector& point, double& value, Vector& direction) {
            const Vector base = point;
            const Vector dir = direction;
            const LineMinimum m = brent_line_minimize(
                [&](double alpha) { return objective(base + alpha * dir); }, options.line_tol, value);
            direction = m.alpha * dir;
            point = base + direction;
            value = m.value;
        };

        while (true) {
            const double fx = fval;
            Eigen::Index biggest = 0;
            double delta = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                Vector direction = directions.col(i);
                const double before = fval;
                line_search(x, fval, direction);
                if (before - fval > delta) {
                    delta = before - fval;
                    biggest = i;
                }
            }
            ++result.iterations;

            const double bound = options.f_tol * (std::abs(fx) + std::abs(fval)) + 1e-20;
            if (2.0 * (fx - fval) <= bound) break;

            Vector direction = x - x_start;
            const Vector extrapolated = 2.0 * x - x_start;
            x_start = x;
            const double f_extrapolated = objective(extrapolated);
            if (fx > f_extrapolated) {
                double t = 2.0 * (fx + f_extrapolated - 2.0 * fval);
                double temp = fx - fval - delta;
                t *= temp * temp;
                temp = fx - f_extrapolated;
                t -= delta * temp * temp;
                if (t < 0.0) {
                    line_search(x, fval, direction);
                    if (direction.cwiseAbs().maxCoeff() > 0.0) {
                        directions.col(biggest) = directions.col(d - 1);
                        directions.col(d - 1) = direction;
                    }
                }
            }
        }
    } catch (const CapReached&) {
        result.capped = true;
    }
    return result;
}

PowellResult powell_minimize(const Vector& x0, BudgetedEvaluator& ev, double f_tol, EvalCount max_evaluations,
                             std::optional<double> f0) {
    PowellOptions options;
    options.f_tol = f_tol;
    options.max_evaluations = max_evaluations;
    return powell_minimize([&ev](const Vector& x) { return ev(x); }, x0, options, f0);
}

}  // namespace dynas
