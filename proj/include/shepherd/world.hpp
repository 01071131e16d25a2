#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "shepherd/vec2.hpp"

namespace shepherd {

// Circular no-go region. Obstacles repel sheep and penalise planned paths.
struct Obstacle {
    Vec2 center;
    double radius{1.0};  // > 0
};

// Force weights, interaction radii and speeds of the reactive model. Values
// not fixed by the scenario fall back to the reference herding defaults.
struct ModelParams {
    // Weights of the sheep force sum.
    double w_inertia{0.5};         // previous-force term
    double w_lcm_attract{1.05};    // attraction to local centre of mass
    double w_shepherd_repel{1.0};  // repulsion from the shepherd
    double w_sheep_repel{2.0};     // sheep-sheep repulsion
    double w_sheep_noise{0.3};     // sheep angular noise
    double w_shepherd_noise{0.3};  // shepherd angular noise
    double w_obstacle_repel{1.0};  // obstacle repulsion on sheep

    // Radii (world units).
    double r_sheep_interact{2.0};      // sheep-sheep repulsion range
    double r_shepherd_detect{65.0};    // sheep react to the shepherd inside this
    double r_shepherd_influence{65.0}; // driving/collecting point offset (r_a)
    double r_obstacle_margin{2.0};     // obstacle repulsion acts within radius+margin

    // n nearest neighbours used for the LCM attraction target.
    // 0 means "all other sheep"; any value is clamped to flock size - 1.
    int n_neighbors{0};

    double speed_sheep{1.0};
    double speed_shepherd{1.5};

    // Herd-zone radius is r_sheep_interact * N^cohesion_exponent. The band
    // half-width of the corridor filter is band_scale times that radius.
    double cohesion_exponent{2.0 / 3.0};
    double band_scale{1.0};

    double goal_radius{20.0};
    int max_steps{2000};

    // Square field [0, field_size]^2; positions are clamped to it each step.
    double field_size{500.0};
};

inline double cohesion_radius(const ModelParams& p, std::size_t flock_size) {
    return p.r_sheep_interact * std::pow(static_cast<double>(flock_size), p.cohesion_exponent);
}

// Full simulation state. Sheep carry the previous step's (normalised) total
// force so the inertia term of the next step can reuse it.
struct WorldState {
    std::vector<Vec2> sheep;
    std::vector<Vec2> sheep_prev_force;  // same length as sheep, unit or zero
    Vec2 shepherd;
    std::vector<Obstacle> obstacles;
    Vec2 goal;
    long t{0};
};

// Arithmetic mean of the flock positions (global centre of mass).
inline Vec2 gcm(const std::vector<Vec2>& sheep) {
    if (sheep.empty()) throw std::invalid_argument("gcm: empty flock");
    Vec2 sum{0.0, 0.0};
    for (const auto& p : sheep) sum += p;
    return sum / static_cast<double>(sheep.size());
}

// Distance from the centre of mass to the furthest sheep.
inline double flock_radius(const std::vector<Vec2>& sheep, const Vec2& centre) {
    if (sheep.empty()) throw std::invalid_argument("flock_radius: empty flock");
    double best = 0.0;
    for (const auto& p : sheep) best = std::max(best, distance(p, centre));
    return best;
}

// Indices of the n sheep nearest to sheep i, i itself excluded. Ties broken
// by lower index so the result is deterministic.
inline std::vector<std::size_t> nearest_neighbors(const std::vector<Vec2>& sheep,
                                                  std::size_t i, std::size_t n) {
    if (i >= sheep.size()) throw std::invalid_argument("nearest_neighbors: bad sheep index");
    if (n > sheep.size() - 1) throw std::invalid_argument("nearest_neighbors: n exceeds flock size - 1");
    std::vector<std::size_t> idx;
    idx.reserve(sheep.size() - 1);
    for (std::size_t j = 0; j < sheep.size(); ++j)
        if (j != i) idx.push_back(j);
    const Vec2 me = sheep[i];
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double da = (sheep[a] - me).norm_sq();
        const double db = (sheep[b] - me).norm_sq();
        if (da != db) return da < db;
        return a < b;
    });
    idx.resize(n);
    return idx;
}

// True iff every sheep lies within the herd zone around the centre of mass.
inline bool is_flock_cohesive(const WorldState& state, const ModelParams& params) {
    const Vec2 c = gcm(state.sheep);
    const double r = cohesion_radius(params, state.sheep.size());
    for (const auto& p : state.sheep)
        if (distance(p, c) > r) return false;
    return true;
}

}  // namespace shepherd
