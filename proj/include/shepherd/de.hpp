#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "shepherd/path.hpp"
#include "shepherd/rng.hpp"
#include "shepherd/vec2.hpp"
#include "shepherd/world.hpp"

namespace shepherd {

// One candidate solution: the waypoint genome plus its score and the control
// parameters that produced it.
struct Individual {
    std::vector<Vec2> waypoints;
    double length{std::numeric_limits<double>::infinity()};
    double violation{0.0};
    double f_z{0.0};
    double cr_z{0.0};

    bool feasible() const { return violation <= 0.0; }
};

// Circular success-history archives for Cr and F, all cells starting at 0.5.
// The write cursor wraps after H updates.
struct ParamMemory {
    std::vector<double> m_cr;
    std::vector<double> m_f;
    std::size_t cursor{0};

    explicit ParamMemory(std::size_t h) : m_cr(h, 0.5), m_f(h, 0.5) {
        if (h == 0) throw std::invalid_argument("ParamMemory: H must be >= 1");
    }
};

struct DEConfig {
    int population_size{30};   // PS
    int generations{150};      // G
    int waypoints{3};          // D
    double p_best_fraction{0.1};
    int history_size{30};      // H
    double sigma_f{0.1};
    double sigma_cr{0.1};
    Vec2 lower{0.0, 0.0};      // per-axis search bounds
    Vec2 upper{500.0, 500.0};
};

// What one optimisation run sees: fixed endpoints, the obstacle set and the
// violation flavour to score candidates with.
struct PlanEnv {
    Vec2 start;
    Vec2 target;
    std::vector<Obstacle> obstacles;
    ViolationMode mode{};
    std::size_t p_max{100};
    SplineBoundary boundary{SplineBoundary::NotAKnot};
};

struct OptimizeResult {
    WaypointPath path;
    double length{0.0};
    double violation{0.0};
    long evaluations{0};
    bool feasible{false};
};

struct SelectionOutcome {
    bool trial_wins{false};
    bool success{false};  // strict improvement in the deciding quantity
};

struct SuccessRecord {
    double cr;
    double f;
    double weight;  // xi
};

namespace de {

// Feasibility-first ordering: any feasible individual precedes any infeasible
// one; feasible sort by length, infeasible by violation.
inline bool better(const Individual& a, const Individual& b) {
    if (a.feasible() != b.feasible()) return a.feasible();
    if (a.feasible()) return a.length < b.length;
    return a.violation < b.violation;
}

inline Individual evaluate_individual(std::vector<Vec2> genome, const PlanEnv& env) {
    Individual ind;
    ind.waypoints = std::move(genome);
    const PolylinePath poly =
        evaluate(WaypointPath{env.start, env.target, ind.waypoints}, env.obstacles, env.mode,
                 env.p_max, env.boundary);
    ind.length = poly.length;
    ind.violation = poly.violation;
    return ind;
}

// Uniform random genomes inside the bounds, already evaluated. Draw order:
// per individual, per waypoint, x then y.
inline std::vector<Individual> init_population(const DEConfig& config, const PlanEnv& env, Rng& rng) {
    std::vector<Individual> pop;
    pop.reserve(config.population_size);
    for (int z = 0; z < config.population_size; ++z) {
        std::vector<Vec2> genome(config.waypoints);
        for (auto& w : genome) {
            w.x = config.lower.x + rng.uniform01() * (config.upper.x - config.lower.x);
            w.y = config.lower.y + rng.uniform01() * (config.upper.y - config.lower.y);
        }
        pop.push_back(evaluate_individual(std::move(genome), env));
    }
    return pop;
}

// Draw (Cr, F) from a random memory cell: Cr normal clamped to [0,1], F
// Cauchy resampled while <= 0 and truncated to 1.
inline std::pair<double, double> sample_params(const ParamMemory& memory, const DEConfig& config,
                                               Rng& rng) {
    const int r = rng.uniform_int(0, static_cast<int>(memory.m_cr.size()) - 1);
    double cr = rng.normal(memory.m_cr[r], config.sigma_cr);
    cr = std::min(1.0, std::max(0.0, cr));
    double f = rng.cauchy(memory.m_f[r], config.sigma_f);
    while (f <= 0.0) f = rng.cauchy(memory.m_f[r], config.sigma_f);
    if (f > 1.0) f = 1.0;
    return {cr, f};
}

// Indices of the best ceil-rounded fraction of the population under the
// feasibility-first ordering (at least one).
inline std::vector<std::size_t> pbest_pool(const std::vector<Individual>& pop, double fraction) {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return better(pop[a], pop[b]); });
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pop.size()))));
    idx.resize(std::min(keep, idx.size()));
    return idx;
}

inline double gene(const std::vector<Vec2>& genome, std::size_t j) {
    const std::size_t d = genome.size();
    return j < d ? genome[j].x : genome[j - d].y;
}

inline void set_gene(std::vector<Vec2>& genome, std::size_t j, double v) {
    const std::size_t d = genome.size();
    if (j < d)
        genome[j].x = v;
    else
        genome[j - d].y = v;
}

// current-to-pbest mutation with binomial crossover over the flattened
// genome (x row then y row), out-of-bound genes clamped to the violated
// bound. Draw order: pbest pick, r1, r2, j_rand, then one uniform per gene.
inline std::vector<Vec2> mutate_crossover(std::size_t z, const std::vector<Individual>& pop,
                                          const std::vector<std::size_t>& pool, double f, double cr,
                                          const DEConfig& config, Rng& rng) {
    const std::size_t ps = pop.size();
    if (ps < 4) throw std::invalid_argument("mutate_crossover: population must have >= 4 members");
    const std::size_t d = pop[z].waypoints.size();
    const std::size_t genes = 2 * d;

    const std::size_t phi = pool[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(pool.size()) - 1))];
    std::size_t r1 = z;
    while (r1 == z) r1 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(ps) - 1));
    std::size_t r2 = z;
    while (r2 == z || r2 == r1)
        r2 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(ps) - 1));
    const std::size_t j_rand =
        static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(genes) - 1));

    std::vector<Vec2> trial = pop[z].waypoints;
    for (std::size_t j = 0; j < genes; ++j) {
        const double take = rng.uniform01();
        if (take <= cr || j == j_rand) {
            double u = gene(pop[z].waypoints, j) +
                       f * (gene(pop[phi].waypoints, j) - gene(pop[z].waypoints, j) +
                            gene(pop[r1].waypoints, j) - gene(pop[r2].waypoints, j));
            const double lo = j < d ? config.lower.x : config.lower.y;
            const double hi = j < d ? config.upper.x : config.upper.y;
            if (u < lo) u = lo;
            if (u > hi) u = hi;
            set_gene(trial, j, u);
        }
    }
    return trial;
}

// Pairwise survivor selection under the feasibility rules. The success flag
// demands strict improvement in the quantity that decided the comparison, so
// ties never enter the parameter archive.
inline SelectionOutcome select(const Individual& parent, const Individual& trial) {
    SelectionOutcome out;
    if (parent.feasible() && trial.feasible()) {
        out.trial_wins = trial.length <= parent.length;
        out.success = trial.length < parent.length;
    } else if (trial.feasible()) {
        out.trial_wins = true;
        out.success = true;
    } else if (parent.feasible()) {
        out.trial_wins = false;
    } else {
        out.trial_wins = trial.violation <= parent.violation;
        out.success = trial.violation < parent.violation;
    }
    return out;
}

// Normalised improvement of a winning trial over its parent. Three cases by
// feasibility transition; violation fractions are treated as zero when the
// parent had no violation. Both-infeasible uses the plain two-term sum; the
// other two add the same sum once more as the lead term.
inline double improvement_weight(const Individual& parent, const Individual& trial) {
    const auto frac = [](double prev, double cur, double denom) {
        if (denom == 0.0) return 0.0;
        return (prev - cur) / denom;
    };
    const double psi_frac = frac(parent.violation, trial.violation, parent.violation);
    const double f_frac = frac(parent.length, trial.length, std::abs(parent.length));
    const double base = std::max(0.0, psi_frac) + std::max(0.0, f_frac);

    if (!parent.feasible() && !trial.feasible()) return base;  // infeasible -> infeasible
    // infeasible -> feasible, or feasible -> feasible
    return std::max(0.0, base) + psi_frac + std::max(0.0, f_frac);
}

// Write the weighted arithmetic mean of successful Cr and the weighted Lehmer
// mean of successful F into the cell under the cursor, then advance it with
// wraparound. No successes (or all-zero weights) leaves the memory untouched.
inline void update_memory(ParamMemory& memory, const std::vector<SuccessRecord>& successes) {
    if (successes.empty()) return;
    double total = 0.0;
    for (const auto& s : successes) total += s.weight;
    if (total <= 0.0) return;

    double cr_mean = 0.0, f_num = 0.0, f_den = 0.0;
    for (const auto& s : successes) {
        const double w = s.weight / total;
        cr_mean += w * s.cr;
        f_num += w * s.f * s.f;
        f_den += w * s.f;
    }
    memory.m_cr[memory.cursor] = cr_mean;
    memory.m_f[memory.cursor] = f_num / f_den;
    memory.cursor = (memory.cursor + 1) % memory.m_cr.size();
}

using GenerationObserver =
    std::function<void(int generation, const std::vector<Individual>& population)>;

// Full constrained DE run: init, G generations of sample/mutate/select with
// memory updates, returning the population best under feasibility-first
// ordering. May return an infeasible best when no feasible path exists; the
// caller decides what to do with it. Evaluation count is PS * (G + 1).
inline OptimizeResult optimize(const PlanEnv& env, const DEConfig& config, Rng& rng,
                               const GenerationObserver& observer = nullptr) {
    if (config.population_size < 4) throw std::invalid_argument("optimize: population_size < 4");
    if (config.waypoints < 1) throw std::invalid_argument("optimize: waypoints < 1");

    std::vector<Individual> pop = init_population(config, env, rng);
    long evals = config.population_size;
    ParamMemory memory(static_cast<std::size_t>(config.history_size));
    if (observer) observer(0, pop);

    std::vector<Individual> next;
    std::vector<SuccessRecord> successes;
    for (int g = 1; g <= config.generations; ++g) {
        const auto pool = pbest_pool(pop, config.p_best_fraction);
        next = pop;
        successes.clear();
        for (std::size_t z = 0; z < pop.size(); ++z) {
            const auto [cr, f] = sample_params(memory, config, rng);
            Individual trial =
                evaluate_individual(mutate_crossover(z, pop, pool, f, cr, config, rng), env);
            trial.f_z = f;
            trial.cr_z = cr;
            ++evals;
            const SelectionOutcome sel = select(pop[z], trial);
            if (sel.success)
                successes.push_back({cr, f, improvement_weight(pop[z], trial)});
            if (sel.trial_wins) next[z] = std::move(trial);
        }
        update_memory(memory, successes);
        pop.swap(next);
        if (observer) observer(g, pop);
    }

    std::size_t best = 0;
    for (std::size_t z = 1; z < pop.size(); ++z)
        if (better(pop[z], pop[best])) best = z;

    OptimizeResult out;
    out.path = WaypointPath{env.start, env.target, pop[best].waypoints};
    out.length = pop[best].length;
    out.violation = pop[best].violation;
    out.evaluations = evals;
    out.feasible = pop[best].feasible();
    return out;
}

}  // namespace de
}  // namespace shepherd
