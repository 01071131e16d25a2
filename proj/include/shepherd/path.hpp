#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "shepherd/spline.hpp"
#include "shepherd/vec2.hpp"
#include "shepherd/world.hpp"

namespace shepherd {

// Candidate path: D free waypoints between a fixed start and target. This is
// the genome the optimizer evolves.
struct WaypointPath {
    Vec2 start;
    Vec2 target;
    std::vector<Vec2> waypoints;  // D >= 1, inside the search bounds
};

// The realised path: p_max spline samples plus its score. violation == 0
// means no sampled point penetrates an (inflated) obstacle.
struct PolylinePath {
    std::vector<Vec2> points;
    double length{0.0};
    double violation{0.0};
};

// Violation flavour: flock_radius == 0 scores the path as a moving point,
// > 0 as a disc of that radius (the flock's safety circle).
struct ViolationMode {
    double flock_radius{0.0};
    static ViolationMode point() { return {0.0}; }
    static ViolationMode disc(double r) { return {r}; }
};

// Realise a waypoint path as p_max points: put start, waypoints and target at
// D+2 equally spaced parameter knots on [0,1], fit one cubic spline per
// coordinate, and sample both at p_max evenly spaced parameters.
inline std::vector<Vec2> interpolate(const WaypointPath& path, std::size_t p_max,
                                     SplineBoundary bc = SplineBoundary::NotAKnot) {
    const std::size_t k = path.waypoints.size() + 2;
    if (path.waypoints.empty()) throw std::invalid_argument("interpolate: need at least one waypoint");
    if (p_max < k) throw std::invalid_argument("interpolate: p_max must be >= waypoints + 2");
    if (!path.start.finite() || !path.target.finite())
        throw std::invalid_argument("interpolate: non-finite endpoint");

    std::vector<double> xs(k), ys(k);
    xs[0] = path.start.x;
    ys[0] = path.start.y;
    for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
        if (!path.waypoints[i].finite()) throw std::invalid_argument("interpolate: non-finite waypoint");
        xs[i + 1] = path.waypoints[i].x;
        ys[i + 1] = path.waypoints[i].y;
    }
    xs[k - 1] = path.target.x;
    ys[k - 1] = path.target.y;

    const std::vector<double> ts = linspace(0.0, 1.0, k);
    const CubicSpline sx(ts, xs, bc);
    const CubicSpline sy(ts, ys, bc);

    const std::vector<double> ls = linspace(0.0, 1.0, p_max);
    std::vector<Vec2> points(p_max);
    for (std::size_t p = 0; p < p_max; ++p) points[p] = {sx(ls[p]), sy(ls[p])};
    return points;
}

inline double path_length(const std::vector<Vec2>& points) {
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < points.size(); ++p) total += distance(points[p], points[p + 1]);
    return total;
}

// Summed clamped penetration of the sampled points into the obstacles.
inline double violation_point(const std::vector<Vec2>& points, const std::vector<Obstacle>& obstacles) {
    double total = 0.0;
    for (const auto& p : points) {
        for (const auto& ob : obstacles) {
            const double d = distance(p, ob.center);
            total += std::max(1.0 - d / ob.radius, 0.0);
        }
    }
    return total;
}

// Same, but the path is a disc of flock_radius: the clearance shrinks by the
// flock radius before scoring. flock_radius == 0 reduces to violation_point.
inline double violation_disc(const std::vector<Vec2>& points, const std::vector<Obstacle>& obstacles,
                             double flock_radius) {
    double total = 0.0;
    for (const auto& p : points) {
        for (const auto& ob : obstacles) {
            const double d = distance(p, ob.center);
            total += std::max(1.0 - (d - flock_radius) / ob.radius, 0.0);
        }
    }
    return total;
}

// interpolate -> (length, violation). Deterministic in its inputs.
inline PolylinePath evaluate(const WaypointPath& path, const std::vector<Obstacle>& obstacles,
                             const ViolationMode& mode, std::size_t p_max,
                             SplineBoundary bc = SplineBoundary::NotAKnot) {
    PolylinePath out;
    out.points = interpolate(path, p_max, bc);
    out.length = path_length(out.points);
    out.violation = violation_disc(out.points, obstacles, mode.flock_radius);
    return out;
}

}  // namespace shepherd
