#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "shepherd/vec2.hpp"

namespace shepherd {

// Seeded pseudo-random stream. All distribution transforms are implemented
// here instead of <random>'s distribution objects, whose output sequences are
// implementation-defined; mt19937_64 itself is bit-identical everywhere, so
// identical seed => identical draw sequence on every platform.
//
// Consumers draw in a fixed documented order (simulation: sheep by ascending
// index, then the shepherd; DE: per individual, params -> indices -> mask),
// which is what makes whole runs reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0,1) with 53 mantissa bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int k = static_cast<int>(uniform01() * span);
        if (k >= span) k = span - 1;
        return lo + k;
    }

    // Unit vector at a uniformly random angle ("angular noise").
    Vec2 unit_angle() {
        const double a = uniform01() * 2.0 * pi;
        return {std::cos(a), std::sin(a)};
    }

    // Box-Muller; draws exactly two uniforms per call, spare discarded so the
    // stream position does not depend on call history.
    double normal(double mean, double sigma) {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    double cauchy(double mean, double sigma) {
        return mean + sigma * std::tan(pi * (uniform01() - 0.5));
    }

    std::uint64_t raw() { return eng_(); }

private:
    static constexpr double pi = 3.14159265358979323846;
    std::mt19937_64 eng_;
};

}  // namespace shepherd
