#pragma once

#include <cstddef>
#include <optional>
#include <variant>

#include "shepherd/rng.hpp"
#include "shepherd/vec2.hpp"
#include "shepherd/world.hpp"

namespace shepherd {

// What the shepherd is doing this step. Driving pushes the flock toward a
// point (the global goal, or the current sub-goal when a planner supplies
// one); Collecting retrieves one stray; ApproachPath heads straight for a
// planned waypoint without regard to the flock.
struct Driving {
    Vec2 toward;
};
struct Collecting {
    std::size_t sheep_index;
};
struct ApproachPath {
    Vec2 waypoint;
};
using BehaviorMode = std::variant<Driving, Collecting, ApproachPath>;

// Component forces acting on one sheep, each unit length or zero, before
// weighting. Kept separate so tests can check terms against a hand-summed
// reference.
struct SheepForceTerms {
    Vec2 inertia;   // previous step's normalised total force
    Vec2 lcm;       // attraction toward the local centre of mass
    Vec2 shepherd;  // repulsion from the shepherd, active inside r_shepherd_detect
    Vec2 sheep;     // resultant repulsion from flockmates inside r_sheep_interact
    Vec2 obstacle;  // resultant repulsion from obstacles inside radius + margin
};

namespace detail {

// Centre of mass of the n nearest neighbours of sheep i. n_neighbors <= 0
// means all other sheep, which collapses to an O(1) rearrangement of the
// flock mean.
inline Vec2 lcm_target(const std::vector<Vec2>& sheep, std::size_t i, int n_neighbors) {
    const std::size_t n_all = sheep.size() - 1;
    if (n_all == 0) return sheep[i];
    std::size_t n = (n_neighbors <= 0) ? n_all
                                       : std::min<std::size_t>(static_cast<std::size_t>(n_neighbors), n_all);
    if (n == n_all) {
        Vec2 sum{0.0, 0.0};
        for (const auto& p : sheep) sum += p;
        return (sum - sheep[i]) / static_cast<double>(n_all);
    }
    const auto idx = nearest_neighbors(sheep, i, n);
    Vec2 sum{0.0, 0.0};
    for (std::size_t j : idx) sum += sheep[j];
    return sum / static_cast<double>(n);
}

}  // namespace detail

inline SheepForceTerms sheep_force_terms(const WorldState& state, std::size_t i,
                                         const ModelParams& params) {
    SheepForceTerms terms;
    const Vec2 me = state.sheep[i];

    terms.inertia = state.sheep_prev_force[i];
    terms.lcm = (detail::lcm_target(state.sheep, i, params.n_neighbors) - me).unit();

    if (distance(me, state.shepherd) < params.r_shepherd_detect)
        terms.shepherd = (me - state.shepherd).unit();

    Vec2 repel{0.0, 0.0};
    for (std::size_t j = 0; j < state.sheep.size(); ++j) {
        if (j == i) continue;
        if (distance(me, state.sheep[j]) < params.r_sheep_interact)
            repel += (me - state.sheep[j]).unit();
    }
    terms.sheep = repel.unit();

    Vec2 avoid{0.0, 0.0};
    for (const auto& ob : state.obstacles) {
        if (distance(me, ob.center) < ob.radius + params.r_obstacle_margin)
            avoid += (me - ob.center).unit();
    }
    terms.obstacle = avoid.unit();

    return terms;
}

// Weighted force sum for sheep i. Draws one noise direction from rng even
// when the noise weight is zero, so the stream position is fixed. The caller
// normalises the result before moving the sheep.
inline Vec2 sheep_total_force(const WorldState& state, std::size_t i, const ModelParams& params,
                              Rng& rng) {
    const SheepForceTerms t = sheep_force_terms(state, i, params);
    const Vec2 noise = rng.unit_angle();
    return params.w_inertia * t.inertia + params.w_lcm_attract * t.lcm +
           params.w_shepherd_repel * t.shepherd + params.w_sheep_repel * t.sheep +
           params.w_sheep_noise * noise + params.w_obstacle_repel * t.obstacle;
}

// Unit force toward the target plus weighted angular noise, renormalised.
// Zero when the target coincides with the shepherd and noise cancels out.
inline Vec2 shepherd_total_force(const WorldState& state, const Vec2& target,
                                 const ModelParams& params, Rng& rng) {
    const Vec2 toward = (target - state.shepherd).unit();
    const Vec2 noise = rng.unit_angle();
    return (toward + params.w_shepherd_noise * noise).unit();
}

// Target position behind the flock on the goal-GCM ray: gcm plus the
// influence range away from the goal. Degenerate gcm == goal returns gcm.
inline Vec2 driving_point(const Vec2& centre, const Vec2& goal, const ModelParams& params) {
    const Vec2 away = (centre - goal).unit();
    if (away == Vec2{0.0, 0.0}) return centre;
    return centre + params.r_shepherd_influence * away;
}

// Target position behind a stray sheep relative to the flock centre.
inline Vec2 collecting_point(const Vec2& sheep_pos, const Vec2& centre, const ModelParams& params) {
    const Vec2 away = (sheep_pos - centre).unit();
    if (away == Vec2{0.0, 0.0}) return sheep_pos;
    return sheep_pos + params.r_shepherd_influence * away;
}

// Classic stray selection: the sheep furthest from the centre of mass, if it
// is outside the herd zone. Ties break toward the lower index.
inline std::optional<std::size_t> select_furthest_strombom(const WorldState& state,
                                                           const ModelParams& params) {
    const Vec2 c = gcm(state.sheep);
    double best_d = -1.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < state.sheep.size(); ++i) {
        const double d = distance(state.sheep[i], c);
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best_d > cohesion_radius(params, state.sheep.size())) return best;
    return std::nullopt;
}

// Corridor-filtered stray selection: strays whose perpendicular distance from
// the gcm->goal line is within the band are skipped, because the flock will
// sweep them up on its way. Among the remaining strays the furthest from the
// centre wins; none means drive.
inline std::optional<std::size_t> select_furthest_unswdst(const WorldState& state, const Vec2& goal,
                                                          const ModelParams& params) {
    const Vec2 c = gcm(state.sheep);
    const Vec2 axis = (goal - c).unit();
    if (axis == Vec2{0.0, 0.0}) return std::nullopt;
    const double herd_zone = cohesion_radius(params, state.sheep.size());
    const double band_half_width = params.band_scale * herd_zone;

    std::optional<std::size_t> best;
    double best_d = -1.0;
    for (std::size_t i = 0; i < state.sheep.size(); ++i) {
        const Vec2 rel = state.sheep[i] - c;
        const double d = rel.norm();
        if (d <= herd_zone) continue;
        if (std::abs(rel.cross(axis)) <= band_half_width) continue;
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// The shepherd's target position implied by the behaviour mode, computed
// from the given (pre-step) state.
inline Vec2 shepherd_target(const WorldState& state, const BehaviorMode& mode,
                            const ModelParams& params) {
    if (const auto* d = std::get_if<Driving>(&mode))
        return driving_point(gcm(state.sheep), d->toward, params);
    if (const auto* c = std::get_if<Collecting>(&mode))
        return collecting_point(state.sheep[c->sheep_index], gcm(state.sheep), params);
    return std::get<ApproachPath>(mode).waypoint;
}

// One synchronous simulation step. All forces are computed from the incoming
// state, then every agent moves at once: sheep at speed_sheep along their
// normalised total force, the shepherd at speed_shepherd toward its target
// unless any sheep is within three interaction radii (then it holds still).
// Noise is drawn sheep-by-ascending-index, then for the shepherd.
inline WorldState step(const WorldState& state, const BehaviorMode& mode,
                       const ModelParams& params, Rng& rng) {
    WorldState next = state;
    const std::size_t n = state.sheep.size();
    const Vec2 lo{0.0, 0.0};
    const Vec2 hi{params.field_size, params.field_size};

    std::vector<Vec2> force(n);
    for (std::size_t i = 0; i < n; ++i)
        force[i] = sheep_total_force(state, i, params, rng).unit();

    const Vec2 target = shepherd_target(state, mode, params);
    const Vec2 dog_force = shepherd_total_force(state, target, params, rng);

    double dog_speed = params.speed_shepherd;
    for (const auto& p : state.sheep) {
        if (distance(p, state.shepherd) <= 3.0 * params.r_sheep_interact) {
            dog_speed = 0.0;
            break;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        next.sheep[i] = clamp(state.sheep[i] + params.speed_sheep * force[i], lo, hi);
        next.sheep_prev_force[i] = force[i];
    }
    next.shepherd = clamp(state.shepherd + dog_speed * dog_force, lo, hi);
    next.t = state.t + 1;
    return next;
}

// Task completion: flock centre of mass inside the goal radius (closed ball).
inline bool is_complete(const WorldState& state, const ModelParams& params) {
    return distance(gcm(state.sheep), state.goal) <= params.goal_radius;
}

}  // namespace shepherd
