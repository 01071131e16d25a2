#include <catch2/catch_amalgamated.hpp>

#include "shepherd/harness.hpp"
#include "shepherd/planner.hpp"

using namespace shepherd;

namespace {

// Tight flock, fast optimizer: enough to exercise the planning logic.
ScenarioConfig quick_scenario() {
    ScenarioConfig s;
    s.name = "quick";
    s.field_size = 200.0;
    s.goal = {0, 0};
    s.shepherd_start = {0, 0};
    s.flock_size = 6;
    s.spawn_min = {60, 60};
    s.spawn_max = {100, 100};
    s.model_params.field_size = 200.0;
    s.model_params.goal_radius = 30.0;
    s.de_config.population_size = 10;
    s.de_config.generations = 20;
    s.de_config.history_size = 10;
    s.de_config.upper = {200, 200};
    s.n_runs = 1;
    return s;
}

WorldState tight_flock_state(Vec2 centre, Vec2 shepherd, Vec2 goal, double field = 200.0) {
    WorldState state;
    state.sheep = {centre + Vec2{0.5, 0.0}, centre + Vec2{-0.5, 0.0}, centre + Vec2{0.0, 0.5},
                   centre + Vec2{0.0, -0.5}};
    state.sheep_prev_force.assign(state.sheep.size(), {});
    state.shepherd = shepherd;
    state.goal = goal;
    (void)field;
    return state;
}

}  // namespace

TEST_CASE("approach plan reaches the driving point without touching the flock") {
    ModelParams params;
    params.field_size = 200.0;
    DEConfig de;
    de.upper = {200, 200};
    PlannerConfig pcfg;

    SECTION("clear line: near-straight path") {
        // shepherd already on the far side, beyond the driving point
        auto state = tight_flock_state({100, 100}, {190, 190}, {0, 0});
        Rng rng(301);
        const auto plan = plan_approach(state, params, de, pcfg, rng);
        REQUIRE(plan.polyline.size() == 100);
        const Vec2 pd = driving_point(gcm(state.sheep), state.goal, params);
        REQUIRE(distance(plan.polyline.front(), state.shepherd) <= 1e-9);
        REQUIRE(distance(plan.polyline.back(), pd) <= 1e-9);
        REQUIRE(plan.feasible);
        REQUIRE(plan.length <= 1.01 * distance(state.shepherd, pd));
    }

    SECTION("flock in the way: a feasible path keeps the keep-out distance") {
        auto state = tight_flock_state({100, 100}, {20, 20}, {0, 0});
        Rng rng(302);
        DEConfig full;  // default budget to find the detour
        full.upper = {200, 200};
        const auto plan = plan_approach(state, params, full, pcfg, rng);
        if (plan.feasible) {
            for (const auto& p : plan.polyline)
                for (const auto& s : state.sheep)
                    REQUIRE(distance(p, s) >= pcfg.sheep_obstacle_radius - 1e-9);
        } else {
            REQUIRE(plan.violation > 0.0);  // reported as soft failure
        }
    }

    SECTION("driving point lies behind the flock") {
        auto state = tight_flock_state({100, 100}, {20, 20}, {0, 0});
        const Vec2 c = gcm(state.sheep);
        const Vec2 pd = driving_point(c, state.goal, params);
        REQUIRE((pd - c).dot(state.goal - c) < 0.0);
    }
}

TEST_CASE("drive plan produces sub-goals ending at the goal") {
    ModelParams params;
    params.field_size = 200.0;
    DEConfig de;
    de.upper = {200, 200};
    PlannerConfig pcfg;

    SECTION("obstacle-free: sub-goals hug the gcm->goal segment") {
        auto state = tight_flock_state({150, 150}, {190, 190}, {10, 10});
        Rng rng(303);
        const auto plan = plan_drive(state, params, de, pcfg, rng);
        REQUIRE(plan.subgoals.size() == 4);  // D = 3 waypoints plus the goal
        REQUIRE(plan.subgoals.back() == state.goal);
        const Vec2 a = gcm(state.sheep);
        const Vec2 b = state.goal;
        for (const auto& w : plan.subgoals) {
            // distance to the segment a-b
            const Vec2 ab = b - a;
            const double t = std::clamp((w - a).dot(ab) / ab.norm_sq(), 0.0, 1.0);
            REQUIRE(distance(w, a + t * ab) <= 5.0);
        }
    }

    SECTION("blocking obstacle: feasible plan clears it by the flock radius") {
        auto state = tight_flock_state({150, 150}, {190, 190}, {10, 10});
        state.obstacles = {{{80, 80}, 15.0}};  // on the diagonal
        Rng rng(304);
        const auto plan = plan_drive(state, params, de, pcfg, rng);
        if (plan.feasible) {
            const WaypointPath path{gcm(state.sheep), state.goal,
                                    {plan.subgoals.begin(), plan.subgoals.end() - 1}};
            const auto pts = interpolate(path, pcfg.p_max, pcfg.boundary);
            for (const auto& p : pts)
                REQUIRE(distance(p, state.obstacles[0].center) >=
                        state.obstacles[0].radius + plan.flock_radius_at_plan - 1e-9);
        }
    }
}

TEST_CASE("advance walks the approach polyline then drives through sub-goals") {
    ModelParams params;
    params.field_size = 200.0;
    auto state = tight_flock_state({100, 100}, {20, 20}, {0, 0});

    PlanState plan;
    plan.approach = {{20, 20}, {24, 20}, {28, 20}, {32, 20}};

    SECTION("cursor skips points already within tolerance") {
        auto out = advance(state, plan, params);
        REQUIRE_FALSE(out.need_drive_plan);
        // first point is the shepherd's own position: skipped
        REQUIRE(std::holds_alternative<ApproachPath>(out.mode));
        REQUIRE(std::get<ApproachPath>(out.mode).waypoint == Vec2{24.0, 20.0});
        REQUIRE(plan.approach_cursor == 1);
    }

    SECTION("phase flips to drive when the polyline is exhausted") {
        // traversal is strictly sequential: the cursor has walked the earlier
        // points and the shepherd now stands on the last one
        plan.approach_cursor = 3;
        state.shepherd = {32, 20};
        auto out = advance(state, plan, params);
        REQUIRE(plan.phase == Phase::Drive);
        REQUIRE(out.need_drive_plan);
        plan.subgoals = {{60, 60}, {30, 30}, {0, 0}};
        plan.subgoal_cursor = 0;
        plan.subgoal_tolerance = 5.0;
        plan.drive_planned = true;
        out = advance(state, plan, params);
        REQUIRE_FALSE(out.need_drive_plan);
        REQUIRE(std::holds_alternative<Driving>(out.mode));
        REQUIRE(std::get<Driving>(out.mode).toward == Vec2{60.0, 60.0});
    }

    SECTION("sub-goal cursor advances when the flock centre arrives") {
        plan.phase = Phase::Drive;
        plan.drive_planned = true;
        plan.subgoal_tolerance = 5.0;
        plan.subgoals = {{100, 100}, {50, 50}, {0, 0}};  // first one already reached
        auto out = advance(state, plan, params);
        REQUIRE(plan.subgoal_cursor == 1);
        REQUIRE(std::get<Driving>(out.mode).toward == Vec2{50.0, 50.0});
    }

    SECTION("a stray interrupts driving without moving the sub-goal cursor") {
        plan.phase = Phase::Drive;
        plan.drive_planned = true;
        plan.subgoal_tolerance = 1.0;
        plan.subgoals = {{50, 50}, {0, 0}};
        const double r = cohesion_radius(params, state.sheep.size() + 1);
        state.sheep.push_back(gcm(state.sheep) + Vec2{0, 4 * r});  // off-corridor stray
        state.sheep_prev_force.push_back({});
        auto out = advance(state, plan, params);
        REQUIRE(std::holds_alternative<Collecting>(out.mode));
        REQUIRE(std::get<Collecting>(out.mode).sheep_index == state.sheep.size() - 1);
        REQUIRE(plan.subgoal_cursor == 0);
    }
}

TEST_CASE("episodes complete and are reproducible") {
    const ScenarioConfig scenario = quick_scenario();

    SECTION("flock spawned inside the goal radius succeeds immediately") {
        ScenarioConfig s = scenario;
        s.spawn_min = {0, 0};
        s.spawn_max = {10, 10};
        const auto r = run_episode(s, Algorithm::Unswdst, 1);
        REQUIRE(r.success);
        REQUIRE(r.steps == 0);
        REQUIRE(r.planner_evals == 0);
    }

    SECTION("same seed, same episode") {
        for (Algorithm a : {Algorithm::Strombom, Algorithm::Unswdst, Algorithm::Unswdst1}) {
            const auto r1 = run_episode(scenario, a, 42);
            const auto r2 = run_episode(scenario, a, 42);
            REQUIRE(r1.steps == r2.steps);
            REQUIRE(r1.success == r2.success);
            REQUIRE(r1.final_state.shepherd.x == r2.final_state.shepherd.x);
            REQUIRE(r1.final_state.shepherd.y == r2.final_state.shepherd.y);
        }
    }

    SECTION("reactive algorithms ignore the optimizer configuration") {
        ScenarioConfig other = scenario;
        other.de_config.population_size = 25;
        other.de_config.generations = 77;
        for (Algorithm a : {Algorithm::Strombom, Algorithm::Unswdst}) {
            const auto r1 = run_episode(scenario, a, 9);
            const auto r2 = run_episode(other, a, 9);
            REQUIRE(r1.steps == r2.steps);
            REQUIRE(r1.final_state.shepherd.x == r2.final_state.shepherd.x);
        }
    }

    SECTION("planner runs exactly two optimisations per episode") {
        const auto r = run_episode(scenario, Algorithm::Unswdst1, 5);
        REQUIRE(r.success);
        const long ps = scenario.de_config.population_size;
        const long g = scenario.de_config.generations;
        REQUIRE(r.planner_evals == 2 * ps * (g + 1));
    }

    SECTION("trace has one row per step plus the final state") {
        const auto r = run_episode(scenario, Algorithm::Unswdst, 3, true);
        REQUIRE(r.success);
        REQUIRE(r.trace.size() == static_cast<std::size_t>(r.steps) + 1);
        REQUIRE(r.trace.front().t == 0);
        REQUIRE(r.trace.back().t == r.steps);
        REQUIRE(r.trace.back().mode == "end");
    }
}
