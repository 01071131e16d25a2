#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shepherd/de.hpp"
#include "shepherd/rng.hpp"
#include "shepherd/vec2.hpp"
#include "shepherd/world.hpp"

namespace shepherd {

enum class Algorithm {
    Strombom,  // reactive: always collect the globally furthest stray
    Unswdst,   // reactive with the corridor filter on stray selection
    Unswdst1,  // corridor filter plus the two-phase path planner
};

inline const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Strombom: return "strombom";
        case Algorithm::Unswdst: return "unswdst";
        default: return "unswdst1";
    }
}

// Knobs of the two-phase planner that are not part of the DE configuration.
struct PlannerConfig {
    // Radius of the keep-out disc placed on every sheep while planning the
    // approach, so the shepherd's path does not scatter the flock.
    double sheep_obstacle_radius{60.0};
    // Approach waypoint reached when the shepherd is this close; 0 means one
    // shepherd step.
    double waypoint_tolerance{0.0};
    // Sub-goal reached when the flock centre is within this fraction of the
    // flock radius measured at plan time.
    double subgoal_tolerance_factor{0.5};
    // Absolute floor on the sub-goal tolerance. A flock that arrives tightly
    // gathered would otherwise have to brush each sub-goal, where the
    // driving direction turns unstable.
    double subgoal_tolerance_min{0.0};
    std::size_t p_max{100};
    SplineBoundary boundary{SplineBoundary::NotAKnot};
};

// Everything needed to run one experiment cell: the environment, the model
// and optimizer settings, and the seed batch.
struct ScenarioConfig {
    std::string name;
    double field_size{500.0};
    Vec2 goal{0.0, 0.0};
    Vec2 shepherd_start{0.0, 0.0};
    int flock_size{10};
    Vec2 spawn_min{0.0, 0.0};
    Vec2 spawn_max{0.0, 0.0};
    std::vector<Obstacle> obstacles;
    ModelParams model_params;
    DEConfig de_config;
    PlannerConfig planner;
    Algorithm algorithm{Algorithm::Unswdst};
    int n_runs{10};
    std::uint64_t base_seed{1};
};

// Spawn the initial world. Sheep positions are drawn uniformly inside the
// spawn box, per sheep x then y, so the flock layout is a pure function of
// the seed.
inline WorldState initial_state(const ScenarioConfig& scenario, Rng& rng) {
    WorldState state;
    state.sheep.reserve(scenario.flock_size);
    for (int i = 0; i < scenario.flock_size; ++i) {
        const double x = rng.uniform(scenario.spawn_min.x, scenario.spawn_max.x);
        const double y = rng.uniform(scenario.spawn_min.y, scenario.spawn_max.y);
        state.sheep.push_back({x, y});
    }
    state.sheep_prev_force.assign(state.sheep.size(), Vec2{0.0, 0.0});
    state.shepherd = scenario.shepherd_start;
    state.obstacles = scenario.obstacles;
    state.goal = scenario.goal;
    state.t = 0;
    return state;
}

}  // namespace shepherd
