#include "dynas/problems.hpp"

#include "dynas/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

namespace dynas {

namespace {

// 10^(exponent_max * (i-1)/(d-1)) for i = 1..d.
Vector power_schedule(int d, double base, double exponent_max) {
    Vector v(d);
    for (int i = 0; i < d; ++i) {
        const double frac = d > 1 ? static_cast<double>(i) / (d - 1) : 0.0;
        v[i] = std::pow(base, exponent_max * frac);
    }
    return v;
}

Vector uniform_vector(int d, double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = u(rng);
    return v;
}

Vector t_osz_vector(const Vector& x) {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = t_osz(x[i]);
    return out;
}

double rosenbrock_sum(const Vector& z) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] * z[i] - z[i + 1];
        const double b = z[i] - 1.0;
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

GallagherPeaks make_peaks(int d, int count, double max_condition, double spread, const Vector& global,
                          const Matrix& rotation, Rng& rng) {
    GallagherPeaks peaks;
    peaks.centers.reserve(count);
    peaks.heights.reserve(count);
    peaks.scales.reserve(count);

    // Condition pool {max_condition^(2j/(count-2))}, drawn without replacement.
    std::vector<double> pool(count - 1);
    for (int j = 0; j < count - 1; ++j) {
        pool[j] = std::pow(1000.0, 2.0 * j / (count - 2));
    }
    std::shuffle(pool.begin(), pool.end(), rng);

    for (int i = 0; i < count; ++i) {
        const double alpha = i == 0 ? max_condition : pool[i - 1];
        Vector scale = power_schedule(d, alpha, 0.5) / std::pow(alpha, 0.25);
        std::vector<int> perm(d);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Vector permuted(d);
        for (int k = 0; k < d; ++k) permuted[k] = scale[perm[k]];

        peaks.scales.push_back(std::move(permuted));
        peaks.heights.push_back(i == 0 ? 10.0 : 1.1 + 8.0 * (i - 1) / (count - 2));
        // Centers are stored in the rotated frame so evaluation needs one product.
        const Vector center = i == 0 ? global : uniform_vector(d, -spread, spread, rng);
        peaks.centers.push_back(rotation * center);
    }
    return peaks;
}

}  // namespace

bool is_implemented(int function_id) {
    return std::find(kImplementedFunctions.begin(), kImplementedFunctions.end(), function_id) !=
           kImplementedFunctions.end();
}

std::string function_name(int function_id) {
    switch (function_id) {
        case 1: return "sphere";
        case 2: return "separable ellipsoid";
        case 6: return "attractive sector";
        case 8: return "rosenbrock";
        case 9: return "rotated rosenbrock";
        case 10: return "rotated ellipsoid";
        case 11: return "discus";
        case 12: return "bent cigar";
        case 13: return "sharp ridge";
        case 14: return "different powers";
        case 21: return "gallagher 101 peaks";
        case 22: return "gallagher 21 peaks";
        default: return "unknown";
    }
}

void validate(const ProblemId& id) {
    if (!is_implemented(id.function_id)) {
        throw ConfigError("unknown function_id " + std::to_string(id.function_id) +
                          " (implemented: 1 2 6 8 9 10 11 12 13 14 21 22)");
    }
    if (id.dimension < 2) {
        throw ConfigError("dimension must be >= 2, got " + std::to_string(id.dimension));
    }
    if (id.instance < 1) {
        throw ConfigError("instance must be >= 1, got " + std::to_string(id.instance));
    }
}

double t_osz(double x) {
    if (x == 0.0) return 0.0;
    const double xhat = std::log(std::abs(x));
    const double c1 = x > 0.0 ? 10.0 : 5.5;
    const double c2 = x > 0.0 ? 7.9 : 3.1;
    const double sign = x > 0.0 ? 1.0 : -1.0;
    return sign * std::exp(xhat + 0.049 * (std::sin(c1 * xhat) + std::sin(c2 * xhat)));
}

Vector t_asy(const Vector& x, double beta) {
    const auto d = x.size();
    Vector out = x;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (x[i] > 0.0) {
            const double frac = d > 1 ? static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
            out[i] = std::pow(x[i], 1.0 + beta * frac * std::sqrt(x[i]));
        }
    }
    return out;
}

Matrix random_rotation(int dimension, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(dimension, dimension);
    for (int c = 0; c < dimension; ++c) {
        for (int r = 0; r < dimension; ++r) m(r, c) = normal(rng);
    }
    // Modified Gram-Schmidt, two passes for orthogonality at round-off level.
    for (int c = 0; c < dimension; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < c; ++k) {
                m.col(c) -= m.col(k).dot(m.col(c)) * m.col(k);
            }
        }
        m.col(c).normalize();
    }
    return m;
}

ProblemInstance instantiate(const ProblemId& id, std::uint64_t suite_seed) {
    validate(id);
    const int d = id.dimension;
    const std::uint64_t base = derive_seed(suite_seed, id.function_id, d, id.instance);

    ProblemInstance p;
    p.id_ = id;
    p.f_opt_ = 0.0;

    Rng shift_rng(derive_seed(base, "x_opt"));
    const double shift_bound = id.function_id == 22 ? 3.92 : 4.0;
    p.x_opt_ = uniform_vector(d, -shift_bound, shift_bound, shift_rng);

    const bool separable = id.function_id == 1 || id.function_id == 2 || id.function_id == 8;
    if (separable) {
        p.rotation_r_ = Matrix::Identity(d, d);
        p.rotation_q_ = Matrix::Identity(d, d);
    } else {
        p.rotation_r_ = random_rotation(d, derive_seed(base, "R"));
        p.rotation_q_ = random_rotation(d, derive_seed(base, "Q"));
    }

    p.ill_conditioning_ = power_schedule(d, 10.0, 6.0);
    p.lambda10_ = power_schedule(d, 10.0, 0.5);
    p.linear_ = p.rotation_q_ * p.lambda10_.asDiagonal() * p.rotation_r_;
    p.rosenbrock_scale_ = std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0);

    if (id.function_id == 21 || id.function_id == 22) {
        Rng peak_rng(derive_seed(base, "peaks"));
        const bool many = id.function_id == 21;
        p.peaks_ = make_peaks(d, many ? 101 : 21, many ? 1.0e6 : 1.0e3, many ? 5.0 : 4.9, p.x_opt_,
                              p.rotation_r_, peak_rng);
    }
    return p;
}

ProblemInstance make_quadratic(const Matrix& hessian, const Vector& x_opt) {
    if (hessian.rows() != hessian.cols() || hessian.rows() != x_opt.size() || x_opt.size() < 1) {
        throw UsageError("make_quadratic: Hessian must be square and match x_opt");
    }
    if (!hessian.isApprox(hessian.transpose(), 1e-12)) throw UsageError("make_quadratic: Hessian must be symmetric");
    ProblemInstance p;
    p.id_ = ProblemId{0, static_cast<int>(x_opt.size()), 1};
    p.x_opt_ = x_opt;
    p.linear_ = hessian;
    p.rotation_r_ = Matrix::Identity(x_opt.size(), x_opt.size());
    p.rotation_q_ = p.rotation_r_;
    return p;
}

double ProblemInstance::evaluate(const Vector& x) const {
    const int d = dimension();
    if (x.size() != d) {
        throw UsageError("evaluate: expected a vector of length " + std::to_string(d) + ", got " +
                         std::to_string(x.size()));
    }
    double f = 0.0;
    switch (id_.function_id) {
        case 0: {
            const Vector diff = x - x_opt_;
            f = 0.5 * diff.dot(linear_ * diff);
            break;
        }
        case 1:
            f = (x - x_opt_).squaredNorm();
            break;
        case 2: {
            const Vector z = t_osz_vector(x - x_opt_);
            f = ill_conditioning_.dot(z.cwiseAbs2());
            break;
        }
        case 6: {
            const Vector z = linear_ * (x - x_opt_);
            double sum = 0.0;
            for (int i = 0; i < d; ++i) {
                const double s = z[i] * x_opt_[i] > 0.0 ? 100.0 : 1.0;
                sum += s * z[i] * s * z[i];
            }
            f = std::pow(t_osz(sum), 0.9);
            break;
        }
        case 8: {
            const Vector z = (rosenbrock_scale_ * (x - x_opt_)).array() + 1.0;
            f = rosenbrock_sum(z);
            break;
        }
        case 9: {
            const Vector z = (rosenbrock_scale_ * (rotation_r_ * (x - x_opt_))).array() + 1.0;
            f = rosenbrock_sum(z);
            break;
        }
        case 10: {
            const Vector z = t_osz_vector(rotation_r_ * (x - x_opt_));
            f = ill_conditioning_.dot(z.cwiseAbs2());
            break;
        }
        case 11: {
            const Vector z = t_osz_vector(rotation_r_ * (x - x_opt_));
            f = 1.0e6 * z[0] * z[0] + z.tail(d - 1).squaredNorm();
            break;
        }
        case 12: {
            const Vector z = rotation_r_ * t_asy(rotation_r_ * (x - x_opt_), 0.5);
            f = z[0] * z[0] + 1.0e6 * z.tail(d - 1).squaredNorm();
            break;
        }
        case 13: {
            const Vector z = linear_ * (x - x_opt_);
            f = z[0] * z[0] + 100.0 * z.tail(d - 1).norm();
            break;
        }
        case 14: {
            const Vector z = rotation_r_ * (x - x_opt_);
            double sum = 0.0;
            for (int i = 0; i < d; ++i) {
                sum += std::pow(std::abs(z[i]), 2.0 + 4.0 * i / (d - 1));
            }
            f = std::sqrt(sum);
            break;
        }
        case 21:
        case 22: {
            const Vector rx = rotation_r_ * x;
            double best = 0.0;
            for (std::size_t i = 0; i < peaks_.centers.size(); ++i) {
                const Vector diff = rx - peaks_.centers[i];
                const double q = peaks_.scales[i].dot(diff.cwiseAbs2());
                best = std::max(best, peaks_.heights[i] * std::exp(-q / (2.0 * d)));
            }
            const double t = t_osz(10.0 - best);
            f = t * t;
            break;
        }
        default:
            throw ConfigError("unknown function_id " + std::to_string(id_.function_id));
    }
    return f + f_opt_;
}

double ProblemInstance::precision(double f_value) const {
    const double p = f_value - f_opt_;
    return p > 0.0 ? p : 0.0;
}

void write_suite_manifest(std::ostream& out, std::span<const ProblemInstance> instances) {
    out << "function_id\tdimension\tinstance\tf_opt\tx_opt\n";
    std::ostringstream line;
    line << std::setprecision(17);
    for (const auto& p : instances) {
        line.str({});
        line << p.id().function_id << '\t' << p.dimension() << '\t' << p.id().instance << '\t' << p.f_opt()
             << '\t';
        for (int i = 0; i < p.dimension(); ++i) {
            if (i) line << ' ';
            line << p.x_opt()[i];
        }
        out << line.str() << '\n';
    }
}

}  // namespace dynas
