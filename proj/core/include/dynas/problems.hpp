#pragma once

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynas {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kBoxLower = -5.0;
inline constexpr double kBoxUpper = 5.0;

/// Invalid experiment or problem configuration (unknown ids, bad ranges).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a call contract (wrong vector length, empty input).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// BBOB function numbers implemented by this suite.
inline constexpr std::array<int, 12> kImplementedFunctions{1, 2, 6, 8, 9, 10, 11, 12, 13, 14, 21, 22};
inline constexpr std::array<int, 5> kSuiteDimensions{2, 3, 5, 10, 20};

bool is_implemented(int function_id);
std::string function_name(int function_id);

struct ProblemId {
    int function_id = 1;
    int dimension = 2;
    int instance = 1;

    auto operator<=>(const ProblemId&) const = default;
};

/// Throws ConfigError when the id is outside the implemented suite.
void validate(const ProblemId& id);

/// Peak layout of the Gallagher functions (F21/F22). Peak 0 is the global one.
struct GallagherPeaks {
    std::vector<Vector> centers;
    std::vector<double> heights;
    std::vector<Vector> scales;  // diagonal of C_i, already permuted
};

/// A concrete (function, dimension, instance) objective. Immutable after
/// construction and safe to share between threads.
class ProblemInstance {
public:
    const ProblemId& id() const { return id_; }
    int dimension() const { return id_.dimension; }
    const Vector& x_opt() const { return x_opt_; }
    double f_opt() const { return f_opt_; }
    const Matrix& rotation_r() const { return rotation_r_; }
    const Matrix& rotation_q() const { return rotation_q_; }
    const GallagherPeaks& peaks() const { return peaks_; }

    /// Raw objective value. Throws UsageError on a dimension mismatch.
    double evaluate(const Vector& x) const;

    /// f_value - f_opt, negative round-off clamped to zero.
    double precision(double f_value) const;

private:
    friend ProblemInstance instantiate(const ProblemId& id, std::uint64_t suite_seed);
    friend ProblemInstance make_quadratic(const Matrix& hessian, const Vector& x_opt);

    ProblemId id_;
    Vector x_opt_;
    double f_opt_ = 0.0;
    Matrix rotation_r_;
    Matrix rotation_q_;
    Vector ill_conditioning_;  // 10^(6 (i-1)/(d-1)), F2/F10
    Vector lambda10_;          // Lambda^10 diagonal, F6/F13
    Matrix linear_;            // Q Lambda^10 R (F6/F13), or the Hessian (id 0)
    double rosenbrock_scale_ = 1.0;
    GallagherPeaks peaks_;
};

/// Deterministic instance: same (id, suite_seed) always yields the same transforms.
ProblemInstance instantiate(const ProblemId& id, std::uint64_t suite_seed);

/// Convex quadratic 0.5 (x - x_opt)^T A (x - x_opt) outside the suite
/// (function id 0). Used to check quasi-Newton curvature estimates.
/// Throws UsageError unless A is square, symmetric and matches x_opt.
ProblemInstance make_quadratic(const Matrix& hessian, const Vector& x_opt);

/// Orthonormalizes a Gaussian matrix drawn from `rng` with modified Gram-Schmidt.
Matrix random_rotation(int dimension, std::uint64_t seed);

/// Oscillation transform T_osz applied elementwise.
double t_osz(double x);
/// Asymmetry transform T_asy^beta.
Vector t_asy(const Vector& x, double beta);

/// Tab-separated audit table: function_id, dimension, instance, f_opt, x_opt...
void write_suite_manifest(std::ostream& out, std::span<const ProblemInstance> instances);

}  // namespace dynas
