#include "dynas/problems.hpp"
#include "dynas/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace dynas;

namespace {

// Straight transcriptions of the sphere and Rosenbrock definitions.
double sphere_oracle(const std::vector<double>& x, const std::vector<double>& xo) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - xo[i]) * (x[i] - xo[i]);
    return s;
}

double rosenbrock_oracle(const std::vector<double>& x, const std::vector<double>& xo) {
    const double d = static_cast<double>(x.size());
    const double c = std::max(1.0, std::sqrt(d) / 8.0);
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = c * (x[i] - xo[i]) + 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        s += 100.0 * std::pow(z[i] * z[i] - z[i + 1], 2) + std::pow(z[i] - 1.0, 2);
    }
    return s;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("optimum has zero precision for every implemented function") {
    for (int f : kImplementedFunctions) {
        for (int d : kSuiteDimensions) {
            for (int inst = 1; inst <= 2; ++inst) {
                const auto p = instantiate({f, d, inst}, 7);
                CAPTURE(f);
                CAPTURE(d);
                CHECK(std::abs(p.evaluate(p.x_opt()) - p.f_opt()) <= 1e-12);
            }
        }
    }
}

TEST_CASE("rotations are orthonormal") {
    for (int d : kSuiteDimensions) {
        const Matrix r = random_rotation(d, 1234 + d);
        CHECK((r.transpose() * r - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
    }
    const auto p = instantiate({10, 20, 3}, 0);
    CHECK((p.rotation_r() * p.rotation_r().transpose() - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("instantiation is deterministic and instance dependent") {
    const auto a = instantiate({14, 5, 2}, 99);
    const auto b = instantiate({14, 5, 2}, 99);
    const auto c = instantiate({14, 5, 3}, 99);
    CHECK(a.x_opt() == b.x_opt());
    CHECK(a.rotation_r() == b.rotation_r());
    CHECK(a.x_opt() != c.x_opt());
    CHECK(a.x_opt().cwiseAbs().maxCoeff() <= 4.0);
    const auto g = instantiate({22, 10, 1}, 99);
    CHECK(g.x_opt().cwiseAbs().maxCoeff() <= 3.92);
    CHECK(g.peaks().centers.size() == 21);
    CHECK(instantiate({21, 3, 1}, 99).peaks().centers.size() == 101);
}

TEST_CASE("sphere and rosenbrock match a direct transcription") {
    Rng rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int d : {2, 5, 20}) {
        const auto sphere = instantiate({1, d, 1}, 3);
        const auto rosen = instantiate({8, d, 1}, 3);
        for (int k = 0; k < 100; ++k) {
            Vector x(d);
            for (int i = 0; i < d; ++i) x[i] = u(rng);
            const double s = sphere_oracle(to_std(x), to_std(sphere.x_opt()));
            const double r = rosenbrock_oracle(to_std(x), to_std(rosen.x_opt()));
            CHECK(std::abs(sphere.evaluate(x) - s) <= 1e-10 * std::max(1.0, s));
            CHECK(std::abs(rosen.evaluate(x) - r) <= 1e-10 * std::max(1.0, r));
        }
    }
}

TEST_CASE("transforms") {
    CHECK(t_osz(0.0) == 0.0);
    CHECK(t_osz(1.0) == doctest::Approx(1.0));
    CHECK(t_osz(-1.0) == doctest::Approx(-1.0));
    CHECK(t_osz(2.0) > 0.0);
    Vector x(3);
    x << -1.0, 0.0, 4.0;
    const Vector y = t_asy(x, 0.5);
    CHECK(y[0] == -1.0);
    CHECK(y[1] == 0.0);
    CHECK(y[2] == doctest::Approx(std::pow(4.0, 1.0 + 0.5 * 2.0)));
}

TEST_CASE("precision is clamped at zero") {
    const auto p = instantiate({1, 2, 1}, 0);
    CHECK(p.precision(-1e-17) == 0.0);
    CHECK(p.precision(0.5) == 0.5);
}

TEST_CASE("invalid problems are rejected") {
    CHECK_THROWS_AS(instantiate({3, 2, 1}, 0), ConfigError);
    CHECK_THROWS_AS(instantiate({1, 1, 1}, 0), ConfigError);
    CHECK_THROWS_AS(instantiate({1, 2, 0}, 0), ConfigError);
    const auto p = instantiate({1, 3, 1}, 0);
    CHECK_THROWS_AS(p.evaluate(Vector::Zero(2)), UsageError);
}

TEST_CASE("functions are defined outside the box") {
    const auto p = instantiate({12, 4, 1}, 0);
    const double v = p.evaluate(Vector::Constant(4, 9.0));
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}

TEST_CASE("custom quadratic") {
    Matrix a(2, 2);
    a << 2.0, 0.5, 0.5, 1.0;
    Vector xo(2);
    xo << 1.0, -1.0;
    const auto q = make_quadratic(a, xo);
    CHECK(q.evaluate(xo) == 0.0);
    CHECK(q.evaluate(Vector::Zero(2)) == doctest::Approx(0.5 * (2.0 - 1.0 + 1.0)));
    CHECK_THROWS_AS(make_quadratic(Matrix::Identity(3, 3), xo), UsageError);
}

TEST_CASE("suite manifest lists every instance") {
    std::vector<ProblemInstance> list{instantiate({1, 2, 1}, 0), instantiate({2, 3, 2}, 0)};
    std::ostringstream out;
    write_suite_manifest(out, list);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.rfind("function_id\t", 0) == 0);
}
