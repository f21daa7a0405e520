#include "dynas/config.hpp"

#include <doctest.h>

using namespace dynas;

TEST_CASE("overrides are applied") {
    HarnessSettings s;
    apply_settings_json(s, R"({"cmaes": {"sigma0": 1.5}, "pso": {"swarm_size": 20},
                               "warmstart": {"mode": "point_only", "step_size_window": 5}})");
    CHECK(s.optimizers.cmaes.sigma0 == 1.5);
    CHECK(s.optimizers.pso.swarm_size == 20);
    CHECK(s.policy.mode == WarmStartMode::point_only);
    CHECK(s.policy.step_size_window == 5);
    CHECK(s.optimizers.de.crossover_rate == 0.7);
}

TEST_CASE("bad configs are rejected") {
    HarnessSettings s;
    CHECK_THROWS_AS(apply_settings_json(s, R"({"cmaes": {"sigma": 1}})"), ConfigError);
    CHECK_THROWS_AS(apply_settings_json(s, R"({"nelder": {}})"), ConfigError);
    CHECK_THROWS_AS(apply_settings_json(s, R"({"pso": {"swarm_size": "many"}})"), ConfigError);
    CHECK_THROWS_AS(apply_settings_json(s, R"({"warmstart": {"hyperbox_radius": -1}})"), ConfigError);
    CHECK_THROWS_AS(apply_settings_json(s, "not json"), ConfigError);
}

TEST_CASE("settings serialize to an accepted config") {
    HarnessSettings s;
    s.optimizers.de.population_per_dimension = 7;
    s.policy.hessian_scale = 2.0;
    HarnessSettings back;
    apply_settings_json(back, settings_to_json(s));
    CHECK(back.optimizers.de.population_per_dimension == 7);
    CHECK(back.policy.hessian_scale == 2.0);
    CHECK(settings_to_json(back) == settings_to_json(s));
}
