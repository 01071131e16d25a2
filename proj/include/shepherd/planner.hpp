#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shepherd/behaviors.hpp"
#include "shepherd/de.hpp"
#include "shepherd/scenario.hpp"

namespace shepherd {

enum class Phase { Approach, Drive, Done };

// Where the planner is within an episode. Phases only move forward:
// Approach (traverse the planned polyline to the driving point), Drive
// (herd the flock through the planned sub-goals), Done.
struct PlanState {
    Phase phase{Phase::Approach};
    std::vector<Vec2> approach;  // polyline the shepherd walks point by point
    std::size_t approach_cursor{0};
    double waypoint_tolerance{0.0};  // 0 falls back to one shepherd step
    bool drive_planned{false};
    std::vector<Vec2> subgoals;  // drive waypoints, last entry is the goal
    std::size_t subgoal_cursor{0};
    double subgoal_tolerance{0.0};
};

struct ApproachPlan {
    std::vector<Vec2> polyline;
    double length{0.0};
    double violation{0.0};
    bool feasible{false};
    long evaluations{0};
};

struct DrivePlan {
    std::vector<Vec2> subgoals;
    double violation{0.0};
    bool feasible{false};
    long evaluations{0};
    double flock_radius_at_plan{0.0};
};

// One recorded simulation step for offline inspection.
struct TraceRow {
    long t{0};
    Vec2 shepherd;
    std::vector<Vec2> sheep;
    std::string mode;
    Vec2 target;
};

struct EpisodeResult {
    bool success{false};
    long steps{0};
    long planner_evals{0};
    WorldState final_state;
    std::vector<TraceRow> trace;  // filled only when tracing was requested
    bool approach_feasible{true};
    bool drive_feasible{true};
};

// Phase 1: plan the shepherd's path from its position to the driving point
// behind the flock. Every sheep becomes a keep-out disc so a feasible path
// cannot scatter the flock. The best path is returned even when infeasible
// (violation is a soft penalty); the caller still traverses it.
inline ApproachPlan plan_approach(const WorldState& state, const ModelParams& params,
                                  const DEConfig& de_config, const PlannerConfig& planner,
                                  Rng& rng) {
    const Vec2 centre = gcm(state.sheep);
    const Vec2 target = driving_point(centre, state.goal, params);

    PlanEnv env;
    env.start = state.shepherd;
    env.target = target;
    env.obstacles = state.obstacles;
    for (const auto& s : state.sheep)
        env.obstacles.push_back({s, planner.sheep_obstacle_radius});
    env.mode = ViolationMode::point();
    env.p_max = planner.p_max;
    env.boundary = planner.boundary;

    const OptimizeResult best = de::optimize(env, de_config, rng);

    ApproachPlan plan;
    plan.polyline = interpolate(best.path, planner.p_max, planner.boundary);
    plan.length = best.length;
    plan.violation = best.violation;
    plan.feasible = best.feasible;
    plan.evaluations = best.evaluations;
    return plan;
}

// Phase 2: plan the flock's path from its centre of mass to the goal,
// scoring candidates with the flock treated as a disc of its current radius.
// Returns the D waypoints plus the goal as ordered sub-goals.
inline DrivePlan plan_drive(const WorldState& state, const ModelParams& /*params*/,
                            const DEConfig& de_config, const PlannerConfig& planner, Rng& rng) {
    const Vec2 centre = gcm(state.sheep);
    const double radius = flock_radius(state.sheep, centre);

    PlanEnv env;
    env.start = centre;
    env.target = state.goal;
    env.obstacles = state.obstacles;
    env.mode = ViolationMode::disc(radius);
    env.p_max = planner.p_max;
    env.boundary = planner.boundary;

    const OptimizeResult best = de::optimize(env, de_config, rng);

    DrivePlan plan;
    plan.subgoals = best.path.waypoints;
    plan.subgoals.push_back(state.goal);
    plan.violation = best.violation;
    plan.feasible = best.feasible;
    plan.evaluations = best.evaluations;
    plan.flock_radius_at_plan = radius;
    return plan;
}

struct AdvanceOutcome {
    BehaviorMode mode{Driving{Vec2{0.0, 0.0}}};
    bool need_drive_plan{false};
};

// Advance the plan cursors against the current state and pick this step's
// behaviour. Approach: walk the polyline point by point, moving on once the
// shepherd is within tolerance (targets are clamped to the field so a spline
// overshoot past a wall cannot stall the cursor). Drive: herd toward the
// current sub-goal, advancing it when the flock centre gets close, unless
// the corridor filter flags a stray to collect first.
inline AdvanceOutcome advance(const WorldState& state, PlanState& plan, const ModelParams& params) {
    AdvanceOutcome out;
    const Vec2 lo{0.0, 0.0};
    const Vec2 hi{params.field_size, params.field_size};

    if (plan.phase == Phase::Approach) {
        const double tol =
            plan.waypoint_tolerance > 0.0 ? plan.waypoint_tolerance : params.speed_shepherd;
        while (plan.approach_cursor < plan.approach.size() &&
               distance(state.shepherd, clamp(plan.approach[plan.approach_cursor], lo, hi)) <= tol)
            ++plan.approach_cursor;
        if (plan.approach_cursor < plan.approach.size()) {
            out.mode = ApproachPath{clamp(plan.approach[plan.approach_cursor], lo, hi)};
            return out;
        }
        plan.phase = Phase::Drive;
    }

    if (!plan.drive_planned) {
        out.need_drive_plan = true;
        out.mode = Driving{state.goal};
        return out;
    }

    while (plan.subgoal_cursor + 1 < plan.subgoals.size() &&
           distance(gcm(state.sheep), plan.subgoals[plan.subgoal_cursor]) <= plan.subgoal_tolerance)
        ++plan.subgoal_cursor;

    const Vec2 subgoal = plan.subgoals[plan.subgoal_cursor];
    if (const auto stray = select_furthest_unswdst(state, subgoal, params)) {
        out.mode = Collecting{*stray};
    } else {
        out.mode = Driving{subgoal};
    }
    return out;
}

namespace detail {

inline const char* mode_name(const BehaviorMode& mode) {
    if (std::holds_alternative<Driving>(mode)) return "driving";
    if (std::holds_alternative<Collecting>(mode)) return "collecting";
    return "approach";
}

}  // namespace detail

// Run one full episode of the chosen algorithm from a seeded spawn. The
// reactive algorithms pick collect/drive targets straight from the state;
// unswdst1 additionally plans the approach path once at the start and the
// drive sub-goals once the driving point is reached.
inline EpisodeResult run_episode(const ScenarioConfig& scenario, Algorithm algorithm,
                                 std::uint64_t seed, bool record_trace = false) {
    Rng rng(seed);
    WorldState state = initial_state(scenario, rng);
    const ModelParams& params = scenario.model_params;

    EpisodeResult result;
    PlanState plan;
    bool approach_planned = false;

    const PlannerConfig planner_cfg = [&] {
        PlannerConfig p = scenario.planner;
        if (p.waypoint_tolerance <= 0.0) p.waypoint_tolerance = params.speed_shepherd;
        return p;
    }();

    long steps = 0;
    while (true) {
        if (is_complete(state, params)) {
            result.success = true;
            break;
        }
        if (steps >= params.max_steps) break;

        BehaviorMode mode = Driving{scenario.goal};
        switch (algorithm) {
            case Algorithm::Strombom: {
                if (const auto stray = select_furthest_strombom(state, params))
                    mode = Collecting{*stray};
                break;
            }
            case Algorithm::Unswdst: {
                if (const auto stray = select_furthest_unswdst(state, scenario.goal, params))
                    mode = Collecting{*stray};
                break;
            }
            case Algorithm::Unswdst1: {
                if (!approach_planned) {
                    const ApproachPlan ap =
                        plan_approach(state, params, scenario.de_config, planner_cfg, rng);
                    plan.approach = ap.polyline;
                    plan.waypoint_tolerance = planner_cfg.waypoint_tolerance;
                    result.planner_evals += ap.evaluations;
                    result.approach_feasible = ap.feasible;
                    approach_planned = true;
                }
                AdvanceOutcome adv = advance(state, plan, params);
                if (adv.need_drive_plan) {
                    const DrivePlan dp =
                        plan_drive(state, params, scenario.de_config, planner_cfg, rng);
                    plan.subgoals = dp.subgoals;
                    plan.subgoal_cursor = 0;
                    plan.subgoal_tolerance =
                        std::max(planner_cfg.subgoal_tolerance_factor * dp.flock_radius_at_plan,
                                 planner_cfg.subgoal_tolerance_min);
                    plan.drive_planned = true;
                    result.planner_evals += dp.evaluations;
                    result.drive_feasible = dp.feasible;
                    adv = advance(state, plan, params);
                }
                mode = adv.mode;
                break;
            }
        }

        if (record_trace)
            result.trace.push_back({state.t, state.shepherd, state.sheep,
                                    detail::mode_name(mode), shepherd_target(state, mode, params)});

        state = step(state, mode, params, rng);
        ++steps;
    }

    if (record_trace)
        result.trace.push_back({state.t, state.shepherd, state.sheep, "end", state.goal});

    if (result.success && plan.phase != Phase::Done) plan.phase = Phase::Done;
    result.steps = steps;
    result.final_state = std::move(state);
    return result;
}

}  // namespace shepherd
