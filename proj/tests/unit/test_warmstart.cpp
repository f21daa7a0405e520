#include "dynas/warmstart.hpp"

#include "dynas/log.hpp"
#include "dynas/mlsl.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dynas;

namespace {

OptimizerConfig config_of(Algorithm a, std::uint64_t seed = 1) {
    OptimizerConfig c;
    c.algorithm = a;
    c.rng_seed = seed;
    return c;
}

WarmStartState state_at(const Vector& best, double value) {
    WarmStartState ws;
    ws.best_point = best;
    ws.best_value = value;
    return ws;
}

Matrix random_spd(int d, std::uint64_t seed) {
    const Matrix r = random_rotation(d, seed);
    Vector ev(d);
    for (int i = 0; i < d; ++i) ev[i] = std::pow(10.0, -2.0 + 4.0 * i / (d - 1));
    return r * ev.asDiagonal() * r.transpose();
}

}  // namespace

TEST_CASE("policy validation") {
    WarmStartPolicy p;
    CHECK_NOTHROW(p.validate());
    p.step_size_window = 1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.hyperbox_radius = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.hessian_scale = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK(parse_warmstart_mode("point-only") == WarmStartMode::point_only);
    CHECK_THROWS_AS(parse_warmstart_mode("half"), ConfigError);
}

TEST_CASE("constant steps give sigma equal to the step") {
    std::vector<Vector> traj;
    for (int j = 0; j < 12; ++j) traj.push_back(Vector::Constant(1, 0.25 * j));
    CHECK(trajectory_step_size(traj, 10) == 0.25);
    CHECK(trajectory_step_size({traj[0]}, 10) == 0.0);
    CHECK(trajectory_step_size({traj[0], traj[3]}, 10) == 0.75);
}

TEST_CASE("inverse Hessian diag(4,1) gives C = diag(2,0.5)") {
    WarmStartState ws = state_at(Vector::Zero(2), 0.0);
    Matrix h(2, 2);
    h << 4.0, 0.0, 0.0, 1.0;
    ws.inv_hessian = h;
    ws.recent_trajectory = {Vector::Zero(2), Vector::Constant(2, 0.1)};
    const CmaesState s = warmstart_cmaes_from_bfgs(ws, {});
    Matrix expected(2, 2);
    expected << 2.0, 0.0, 0.0, 0.5;
    CHECK((s.covariance - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(s.sigma == doctest::Approx(std::sqrt(0.02)));
    CHECK(s.path_c.isZero());
    CHECK(s.path_sigma.isZero());
}

TEST_CASE("unit determinant and axis alignment for random SPD matrices") {
    for (int d : {2, 5, 10}) {
        const Matrix h = random_spd(d, 40 + d);
        const Matrix c = unit_determinant(h);
        CHECK(std::abs(c.determinant() - 1.0) < 1e-8);
        // Same eigenvectors: C is a scalar multiple of H.
        const double scale = c.trace() / h.trace();
        CHECK((c - scale * h).norm() / c.norm() < 1e-10);
    }
}

TEST_CASE("identity inverse Hessian gives identity covariance") {
    WarmStartState ws = state_at(Vector::Ones(3), 1.0);
    ws.inv_hessian = Matrix::Identity(3, 3);
    const CmaesState s = warmstart_cmaes_from_bfgs(ws, {});
    CHECK((s.covariance - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    // Degenerate trajectory falls back to the default step size.
    CHECK(s.sigma == kDefaultWarmStartSigma);
}

TEST_CASE("singular inverse Hessian is repaired") {
    WarmStartState ws = state_at(Vector::Zero(2), 0.0);
    Matrix h(2, 2);
    h << 1.0, 1.0, 1.0, 1.0;
    ws.inv_hessian = h;
    const bool was = warnings_enabled();
    set_warnings_enabled(false);
    const CmaesState s = warmstart_cmaes_from_bfgs(ws, {});
    set_warnings_enabled(was);
    CHECK(std::isfinite(s.covariance.determinant()));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.covariance);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("point_only keeps the mean and resets shape and scale") {
    WarmStartState ws = state_at(Vector::Constant(2, 0.3), 0.0);
    ws.inv_hessian = Matrix::Identity(2, 2) * 9.0;
    ws.recent_trajectory = {Vector::Zero(2), Vector::Constant(2, 1.0)};
    WarmStartPolicy point;
    point.mode = WarmStartMode::point_only;
    const CmaesState a = warmstart_cmaes_from_bfgs(ws, point);
    const CmaesState b = warmstart_cmaes_from_bfgs(ws, {});
    CHECK(a.mean == b.mean);
    CHECK(a.covariance == Matrix::Identity(2, 2));
    CHECK(a.sigma == 0.5);
    CHECK(b.sigma == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("warm-started CMA-ES samples match sigma^2 C") {
    WarmStartState ws = state_at(Vector::Zero(2), 0.0);
    Matrix h(2, 2);
    h << 4.0, 1.0, 1.0, 1.0;
    ws.inv_hessian = h;
    ws.recent_trajectory = {Vector::Zero(2), Vector::Constant(2, 0.05), Vector::Constant(2, 0.1)};
    const CmaesState s = warmstart_cmaes_from_bfgs(ws, {});
    Cmaes cma(config_of(Algorithm::cmaes), s);
    Matrix acc = Matrix::Zero(2, 2);
    int n = 0;
    while (n < 10000) {
        for (const Vector& x : cma.sample_offspring()) {
            acc += x * x.transpose();
            ++n;
        }
    }
    const Matrix expected = s.sigma * s.sigma * s.covariance;
    CHECK((acc / n - expected).norm() / expected.norm() < 0.05);
}

TEST_CASE("BFGS from CMA-ES uses beta sigma^2 C") {
    WarmStartState ws = state_at(Vector::Constant(2, 1.0), 3.0);
    Matrix c(2, 2);
    c << 2.0, 0.0, 0.0, 0.5;
    ws.covariance = c;
    ws.sigma = 0.1;
    const BfgsState s = warmstart_bfgs_from_cmaes(ws, {});
    CHECK(s.inv_hessian(0, 0) == doctest::Approx(0.02));
    CHECK(s.inv_hessian(1, 1) == doctest::Approx(0.005));
    CHECK(s.x == ws.best_point);
    CHECK(s.f == 3.0);
    ws.covariance = Matrix::Identity(2, 2);
    ws.sigma = 1.0;
    CHECK(warmstart_bfgs_from_cmaes(ws, {}).inv_hessian == Matrix::Identity(2, 2));
}

TEST_CASE("hyperbox populations from MLSL") {
    WarmStartPolicy policy;
    SUBCASE("origin") {
        const WarmStartState ws = state_at(Vector::Zero(3), 0.0);
        const PsoState swarm = warmstart_pso_from_mlsl(ws, policy, config_of(Algorithm::pso));
        CHECK(swarm.positions.size() == 40);
        CHECK(swarm.positions.front() == ws.best_point);
        CHECK(swarm.values.front() == 0.0);
        for (const auto& x : swarm.positions) CHECK(x.cwiseAbs().maxCoeff() <= 0.1);
        for (const auto& v : swarm.velocities) CHECK(v.cwiseAbs().maxCoeff() <= 0.1);
    }
    SUBCASE("corner") {
        const WarmStartState ws = state_at(Vector::Constant(4, 5.0), 2.0);
        const DeState pop = warmstart_de_from_mlsl(ws, policy, config_of(Algorithm::de));
        CHECK(pop.population.size() == 20);
        for (const auto& x : pop.population) {
            CHECK(x.minCoeff() >= 4.9);
            CHECK(x.maxCoeff() <= 5.0);
        }
    }
    SUBCASE("seeded member keeps the best value") {
        const auto p = instantiate({1, 3, 1}, 0);
        const WarmStartState ws = state_at(p.x_opt(), p.evaluate(p.x_opt()));
        const DeState pop = warmstart_de_from_mlsl(ws, policy, config_of(Algorithm::de));
        double best = *pop.values.front();
        for (std::size_t i = 1; i < pop.population.size(); ++i) best = std::min(best, p.evaluate(pop.population[i]));
        CHECK(best <= ws.best_value);
    }
}

TEST_CASE("CMA-ES from MLSL uses defaults") {
    const WarmStartState ws = state_at(Vector::Constant(2, 0.123456789), 1.0);
    const CmaesState s = warmstart_cmaes_from_mlsl(ws);
    CHECK(s.covariance == Matrix::Identity(2, 2));
    CHECK(s.mean == ws.best_point);
    CHECK(s.sigma == 0.5);
    Cmaes cma(config_of(Algorithm::cmaes), s);
    Matrix acc = Matrix::Zero(2, 2);
    int n = 0;
    while (n < 10000) {
        for (const Vector& x : cma.sample_offspring()) {
            acc += (x - s.mean) * (x - s.mean).transpose();
            ++n;
        }
    }
    CHECK((acc / n - 0.25 * Matrix::Identity(2, 2)).norm() / 0.5 < 0.05);
}

TEST_CASE("generic warm start") {
    const int d = 5;
    WarmStartState ws = state_at(Vector::Constant(d, 1.0), 0.5);
    std::vector<Sample> pop;
    for (int i = 0; i < 40; ++i) pop.push_back({Vector::Constant(d, 0.01 * i), 1.0 + i});
    ws.population = pop;

    SUBCASE("PSO to DE keeps the 25 best") {
        auto opt = warmstart_generic(ws, config_of(Algorithm::de), {});
        const auto& de = dynamic_cast<const De&>(*opt).state();
        REQUIRE(de.population.size() == 25);
        CHECK(de.population.front() == ws.best_point);
        for (int i = 1; i < 25; ++i) CHECK(*de.values[i] == 1.0 + (i - 1));
    }
    SUBCASE("DE to PSO carries members with zero velocity") {
        ws.population->resize(10);
        auto opt = warmstart_generic(ws, config_of(Algorithm::pso), {});
        const auto& swarm = dynamic_cast<const Pso&>(*opt).state();
        REQUIRE(swarm.positions.size() == 40);
        for (int i = 0; i < 11; ++i) CHECK(swarm.velocities[i].isZero());
        for (int i = 11; i < 40; ++i) CHECK(!swarm.values[i].has_value());
    }
    SUBCASE("anything to BFGS starts at the best point") {
        auto opt = warmstart_generic(ws, config_of(Algorithm::bfgs), {});
        const auto& b = dynamic_cast<const Bfgs&>(*opt).state();
        CHECK(b.x == ws.best_point);
        CHECK(b.inv_hessian == Matrix::Identity(d, d));
    }
    SUBCASE("CMA-ES step size from the population spread") {
        auto opt = warmstart_generic(ws, config_of(Algorithm::cmaes), {});
        const auto& c = dynamic_cast<const Cmaes&>(*opt).state();
        CHECK(c.mean == ws.best_point);
        CHECK(c.sigma > 0.0);
        CHECK(c.sigma < 0.5);
    }
}

TEST_CASE("extract needs an evaluation") {
    const auto p = instantiate({1, 2, 1}, 0);
    BudgetedEvaluator ev(p, 100, 1e-8);
    auto opt = make_optimizer(config_of(Algorithm::cmaes), 2);
    CHECK_THROWS_AS(extract(*opt, ev), UsageError);
}

TEST_CASE("extract fields per algorithm") {
    const auto p = instantiate({10, 3, 1}, 0);
    SUBCASE("BFGS") {
        OptimizerConfig c = config_of(Algorithm::bfgs);
        c.bfgs.history = 11;
        Bfgs b(c, 3);
        BudgetedEvaluator ev(p, 100000, 1e-300);
        while (b.state().iterations < 12 && !b.is_finished()) b.step(ev);
        const WarmStartState ws = extract(b, ev);
        CHECK(ws.inv_hessian.has_value());
        CHECK(ws.recent_trajectory.size() == 11);
        CHECK(ws.best_value == ev.best_value());
        CHECK(ws.evaluations_spent == ev.evals_used());
        CHECK(!ws.population);
    }
    SUBCASE("CMA-ES") {
        Cmaes c(config_of(Algorithm::cmaes), 3);
        BudgetedEvaluator ev(p, 300, 1e-8);
        drive(c, ev);
        const WarmStartState ws = extract(c, ev);
        CHECK(ws.mean.has_value());
        CHECK(ws.sigma.has_value());
        CHECK(ws.covariance.has_value());
        CHECK(!ws.population);
    }
    SUBCASE("MLSL") {
        Mlsl m(config_of(Algorithm::mlsl), 3);
        BudgetedEvaluator ev(p, 3000, 1e-8);
        drive(m, ev);
        const WarmStartState ws = extract(m, ev);
        double best_minimum = std::numeric_limits<double>::infinity();
        for (const auto& s : m.state().local_minima) best_minimum = std::min(best_minimum, s.value);
        CHECK(ws.best_value <= best_minimum);
        CHECK(ws.population.has_value());
    }
}

TEST_CASE("warm starting performs no evaluations") {
    const auto p = instantiate({1, 2, 1}, 0);
    BudgetedEvaluator ev(p, 1000, 1e-8);
    Bfgs b(config_of(Algorithm::bfgs), 2);
    b.step(ev);
    b.step(ev);
    const EvalCount used = ev.evals_used();
    const WarmStartState ws = extract(b, ev);
    for (Algorithm target : kPortfolio) warm_start(Algorithm::bfgs, ws, config_of(target), {});
    CHECK(ev.evals_used() == used);
    CHECK(ws.evaluations_spent == used);
}
