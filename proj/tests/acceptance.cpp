// Acceptance suite: each criterion prints one PASS/FAIL line; the process
// exits with the number of failed criteria. Run with a list of criterion
// numbers, or no arguments for all of them.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "shepherd/shepherd.hpp"

using namespace shepherd;

namespace {

const std::filesystem::path kScenarios = std::filesystem::path(SHEPHERD_SOURCE_DIR) / "scenarios";

struct Check {
    std::string description;
    std::function<bool(std::string&)> run;
};

double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.norm_sq(), 0.0, 1.0);
    return distance(p, a + t * ab);
}

// --- criterion 1: spline exactness ---------------------------------------
bool spline_exactness(std::string& detail) {
    Rng rng(9001);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = rng.uniform_int(1, 6);
        WaypointPath path;
        path.start = {rng.uniform(0, 200), rng.uniform(0, 200)};
        path.target = {rng.uniform(0, 200), rng.uniform(0, 200)};
        for (int i = 0; i < d; ++i)
            path.waypoints.push_back({rng.uniform(0, 200), rng.uniform(0, 200)});

        const std::size_t k = path.waypoints.size() + 2;
        const std::size_t p_max = 8 * (k - 1) + 1;  // sample grid contains the knots
        const auto pts = interpolate(path, p_max);

        std::vector<Vec2> knots{path.start};
        knots.insert(knots.end(), path.waypoints.begin(), path.waypoints.end());
        knots.push_back(path.target);
        for (std::size_t i = 0; i < k; ++i) {
            const Vec2 got = pts[i * 8];
            if (std::abs(got.x - knots[i].x) > 1e-9 || std::abs(got.y - knots[i].y) > 1e-9) {
                detail = "knot mismatch in trial " + std::to_string(trial);
                return false;
            }
        }
    }

    const WaypointPath straight{{0, 0}, {100, 0}, {{25, 0}, {50, 0}, {75, 0}}};
    const double len = path_length(interpolate(straight, 100));
    if (std::abs(len - 100.0) > 1e-6) {
        detail = "collinear length " + std::to_string(len);
        return false;
    }
    detail = "knots within 1e-9, collinear length within 1e-6";
    return true;
}

// --- criterion 2: violation oracle ----------------------------------------
bool violation_oracle(std::string& detail) {
    Rng rng(9002);
    for (int trial = 0; trial < 200; ++trial) {
        WaypointPath path;
        path.start = {rng.uniform(0, 200), rng.uniform(0, 200)};
        path.target = {rng.uniform(0, 200), rng.uniform(0, 200)};
        const int d = rng.uniform_int(1, 5);
        for (int i = 0; i < d; ++i)
            path.waypoints.push_back({rng.uniform(0, 200), rng.uniform(0, 200)});
        const auto pts = interpolate(path, 100);

        std::vector<Obstacle> obs;
        const int n_obs = rng.uniform_int(1, 10);
        for (int i = 0; i < n_obs; ++i)
            obs.push_back({{rng.uniform(0, 200), rng.uniform(0, 200)}, rng.uniform(2, 30)});
        const double fr = (trial % 2 == 0) ? 0.0 : rng.uniform(0, 25);

        const double got = fr == 0.0 ? violation_point(pts, obs) : violation_disc(pts, obs, fr);

        // independent per-point recomputation, reversed loops, long double
        long double expect = 0.0L;
        bool penetrates = false;
        for (const auto& ob : obs) {
            for (const auto& p : pts) {
                const long double dd = std::sqrt(static_cast<long double>(
                    (p.x - ob.center.x) * (p.x - ob.center.x) +
                    (p.y - ob.center.y) * (p.y - ob.center.y)));
                const long double pen = 1.0L - (dd - fr) / ob.radius;
                if (pen > 0.0L) expect += pen;
                if (dd < fr + ob.radius) penetrates = true;
            }
        }
        if (std::abs(got - static_cast<double>(expect)) > 1e-9) {
            detail = "value mismatch in trial " + std::to_string(trial);
            return false;
        }
        if ((got > 0.0) != penetrates) {
            detail = "zero-iff-clear mismatch in trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "200 instances match the recomputation oracle to 1e-9";
    return true;
}

// --- criterion 3: DE sanity ------------------------------------------------
bool de_sanity(std::string& detail) {
    DEConfig config;  // PS=30, G=150, D=3
    config.lower = {0, 0};
    config.upper = {200, 200};
    for (int seed = 1; seed <= 20; ++seed) {
        Rng seeder(1000 + seed);
        PlanEnv env;
        env.start = {seeder.uniform(0, 200), seeder.uniform(0, 200)};
        env.target = {seeder.uniform(0, 200), seeder.uniform(0, 200)};
        if (distance(env.start, env.target) < 20.0) env.target = env.start + Vec2{50, 50};
        env.mode = ViolationMode::point();

        bool elitism_ok = true;
        bool have_prev = false;
        bool prev_feasible = false;
        double prev_value = 0.0;
        Rng rng(seed);
        const auto result = de::optimize(env, config, rng,
                                         [&](int, const std::vector<Individual>& pop) {
            const Individual* best = &pop.front();
            for (const auto& ind : pop)
                if (de::better(ind, *best)) best = &ind;
            const bool feasible = best->feasible();
            const double value = feasible ? best->length : best->violation;
            if (have_prev) {
                if (prev_feasible && (!feasible || value > prev_value + 1e-12)) elitism_ok = false;
                if (!prev_feasible && !feasible && value > prev_value + 1e-12) elitism_ok = false;
            }
            have_prev = true;
            prev_feasible = feasible;
            prev_value = value;
        });

        const double straight = distance(env.start, env.target);
        if (result.violation != 0.0 || result.length > 1.01 * straight || !elitism_ok) {
            detail = "seed " + std::to_string(seed) + ": L=" + std::to_string(result.length) +
                     " straight=" + std::to_string(straight) +
                     " psi=" + std::to_string(result.violation) +
                     (elitism_ok ? "" : " elitism violated");
            return false;
        }
    }
    detail = "20/20 seeds feasible within 1% of the straight line, elitism held";
    return true;
}

// --- criterion 4: adaptation bounds ----------------------------------------
bool adaptation_bounds(std::string& detail) {
    // fixture means: equal-weight Lehmer of {0.5, 1.0} and weighted mean of
    // {0.2, 0.8} with weights {0.75, 0.25}
    {
        ParamMemory mem(4);
        de::update_memory(mem, {{0.5, 0.5, 1.0}, {0.5, 1.0, 1.0}});
        if (std::abs(mem.m_f[0] - 0.625 / 0.75) > 1e-9) {
            detail = "Lehmer fixture mismatch";
            return false;
        }
        de::update_memory(mem, {{0.2, 0.5, 3.0}, {0.8, 0.5, 1.0}});
        if (std::abs(mem.m_cr[1] - 0.35) > 1e-9) {
            detail = "weighted arithmetic fixture mismatch";
            return false;
        }
    }
    {
        // cursor wraps after H updates, overwriting the oldest cell
        ParamMemory mem(5);
        for (int i = 0; i < 5; ++i) de::update_memory(mem, {{0.1, 0.5, 1.0}});
        if (mem.cursor != 0) {
            detail = "cursor did not wrap";
            return false;
        }
        de::update_memory(mem, {{0.9, 0.5, 1.0}});
        if (mem.cursor != 1 || std::abs(mem.m_cr[0] - 0.9) > 1e-12) {
            detail = "wraparound overwrite failed";
            return false;
        }
    }

    // full optimisation with the documented loop; every sampled parameter
    // must stay in its domain and so must the memory cells
    DEConfig config;
    config.lower = {0, 0};
    config.upper = {200, 200};
    PlanEnv env;
    env.start = {10, 100};
    env.target = {190, 100};
    env.obstacles = {{{100, 100}, 25.0}, {{60, 90}, 15.0}};
    env.mode = ViolationMode::point();

    Rng rng(9004);
    auto pop = de::init_population(config, env, rng);
    ParamMemory memory(static_cast<std::size_t>(config.history_size));
    long wraps = 0;
    std::size_t prev_cursor = 0;
    for (int g = 1; g <= config.generations; ++g) {
        const auto pool = de::pbest_pool(pop, config.p_best_fraction);
        auto next = pop;
        std::vector<SuccessRecord> successes;
        for (std::size_t z = 0; z < pop.size(); ++z) {
            const auto [cr, f] = de::sample_params(memory, config, rng);
            if (cr < 0.0 || cr > 1.0 || f <= 0.0 || f > 1.0) {
                detail = "sampled parameter out of domain";
                return false;
            }
            Individual trial = de::evaluate_individual(
                de::mutate_crossover(z, pop, pool, f, cr, config, rng), env);
            trial.f_z = f;
            trial.cr_z = cr;
            const auto sel = de::select(pop[z], trial);
            if (sel.success) successes.push_back({cr, f, de::improvement_weight(pop[z], trial)});
            if (sel.trial_wins) next[z] = std::move(trial);
        }
        de::update_memory(memory, successes);
        if (memory.cursor < prev_cursor) ++wraps;
        prev_cursor = memory.cursor;
        for (std::size_t h = 0; h < memory.m_cr.size(); ++h) {
            if (memory.m_cr[h] < 0.0 || memory.m_cr[h] > 1.0 || memory.m_f[h] <= 0.0 ||
                memory.m_f[h] > 1.0) {
                detail = "memory cell out of domain at generation " + std::to_string(g);
                return false;
            }
        }
        pop.swap(next);
    }
    std::ostringstream os;
    os << "all sampled Cr in [0,1], F in (0,1], memory in domain, " << wraps
       << " cursor wraps, fixture means exact";
    detail = os.str();
    return true;
}

// --- criteria 5 and 6: experiment directions -------------------------------
RunMetrics run_cell(const std::string& stem, Algorithm algorithm, int seeds) {
    ScenarioConfig s = load_scenario(kScenarios / (stem + ".json"));
    s.algorithm = algorithm;
    if (seeds > 0) s.n_runs = seeds;
    return run_batch(s);
}

bool table1_direction(std::string& detail) {
    const auto strombom10 = run_cell("tab1_n10", Algorithm::Strombom, 10);
    const auto unswdst10 = run_cell("tab1_n10", Algorithm::Unswdst, 10);
    if (strombom10.success_rate != 1.0 || unswdst10.success_rate != 1.0) {
        detail = "10-sheep success rates below 100%";
        return false;
    }
    if (!(unswdst10.mean <= 0.85 * strombom10.mean)) {
        std::ostringstream os;
        os << "10 sheep: unswdst mean " << unswdst10.mean << " vs strombom " << strombom10.mean;
        detail = os.str();
        return false;
    }

    const auto strombom100 = run_cell("tab1_n100", Algorithm::Strombom, 10);
    const auto unswdst100 = run_cell("tab1_n100", Algorithm::Unswdst, 10);
    if (strombom100.success_rate != 1.0 || unswdst100.success_rate != 1.0) {
        detail = "100-sheep success rates below 100%";
        return false;
    }
    if (!(unswdst100.mean <= strombom100.mean)) {
        std::ostringstream os;
        os << "100 sheep: unswdst mean " << unswdst100.mean << " vs strombom " << strombom100.mean;
        detail = os.str();
        return false;
    }
    std::ostringstream os;
    os << "10 sheep " << unswdst10.mean << " vs " << strombom10.mean << "; 100 sheep "
       << unswdst100.mean << " vs " << strombom100.mean;
    detail = os.str();
    return true;
}

bool table2_direction(std::string& detail) {
    int improved = 0;
    long runs = 0, successes = 0;
    std::ostringstream os;
    for (const auto& [stem, algos] : table_matrix(2)) {
        (void)algos;
        const auto unswdst = run_cell(stem, Algorithm::Unswdst, 20);
        const auto planner = run_cell(stem, Algorithm::Unswdst1, 20);
        runs += unswdst.runs + planner.runs;
        successes += unswdst.successes + planner.successes;
        const bool better = planner.successes > 0 && unswdst.successes > 0 &&
                            planner.mean < unswdst.mean;
        if (better) ++improved;
        os << stem << " " << planner.mean << (better ? " < " : " !< ") << unswdst.mean << "; ";
    }
    const double rate = static_cast<double>(successes) / static_cast<double>(runs);
    if (improved < 8 || rate < 0.95) {
        std::ostringstream fail;
        fail << "improved " << improved << "/9, success rate " << rate << " | " << os.str();
        detail = fail.str();
        return false;
    }
    std::ostringstream ok;
    ok << "improved " << improved << "/9, success rate " << rate;
    detail = ok.str();
    return true;
}

// --- criterion 7: determinism ----------------------------------------------
bool determinism(std::string& detail) {
    ScenarioConfig s = load_scenario(kScenarios / "smoke.json");
    s.algorithm = Algorithm::Unswdst1;  // exercises the optimizer too
    s.n_runs = 2;

    const auto dir = std::filesystem::temp_directory_path() / "shepherd_acceptance_det";
    std::filesystem::remove_all(dir);
    std::string bytes[2];
    for (int round = 0; round < 2; ++round) {
        const auto m = run_batch(s);
        bytes[round] = metrics_to_csv({{s.name, to_string(s.algorithm), m}});
        write_file((std::filesystem::create_directories(dir), dir / "metrics.csv"), bytes[round]);
    }
    std::filesystem::remove_all(dir);
    if (bytes[0] != bytes[1] || bytes[0].empty()) {
        detail = "metrics.csv differed across identical runs";
        return false;
    }
    detail = "identical scenario and seed produced byte-identical metrics.csv";
    return true;
}

// --- criterion 8: corridor filter fixture ----------------------------------
bool filter_fixture(std::string& detail) {
    ModelParams params;
    WorldState state;
    // tight cluster near (100,100), goal to the west along the x-axis
    state.sheep = {{99, 99}, {101, 99}, {99, 101}, {101, 101}};
    state.goal = {0, 100};
    const double r = cohesion_radius(params, 6);
    state.sheep.push_back({100.0 - 5.0 * r, 100.0});  // stray on the gcm->goal axis, furthest
    state.sheep.push_back({100.0, 100.0 + 3.0 * r});  // stray perpendicular to the axis
    state.sheep_prev_force.assign(state.sheep.size(), {});
    state.shepherd = {200, 200};

    const auto classic = select_furthest_strombom(state, params);
    const auto filtered = select_furthest_unswdst(state, state.goal, params);
    if (!classic || *classic != 4) {
        detail = "classic selection did not pick the axis-aligned sheep";
        return false;
    }
    if (!filtered || *filtered != 5) {
        detail = "corridor selection did not pick the perpendicular sheep";
        return false;
    }
    detail = "classic picks the axis stray, corridor filter picks the perpendicular stray";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, Check> checks{
        {1, {"spline exactness", spline_exactness}},
        {2, {"violation oracle", violation_oracle}},
        {3, {"DE sanity on obstacle-free planning", de_sanity}},
        {4, {"adaptation bounds and memory means", adaptation_bounds}},
        {5, {"obstacle-free direction (500x500)", table1_direction}},
        {6, {"cluttered direction (9 scenarios)", table2_direction}},
        {7, {"byte-identical metrics determinism", determinism}},
        {8, {"corridor filter fixture", filter_fixture}},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [num, check] : checks) selected.push_back(num);

    int failures = 0;
    for (int num : selected) {
        const auto it = checks.find(num);
        if (it == checks.end()) {
            std::printf("criterion %d: unknown\n", num);
            ++failures;
            continue;
        }
        std::string detail;
        const bool ok = it->second.run(detail);
        std::printf("criterion %d [%s] %s: %s\n", num, ok ? "PASS" : "FAIL",
                    it->second.description.c_str(), detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
