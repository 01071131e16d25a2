#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "shepherd/planner.hpp"
#include "shepherd/scenario.hpp"

namespace shepherd {

// Scenario file or config problem; the message names the offending field.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Aggregate over one seed batch. best/mean/std cover successful runs only
// (NaN when there were none); success_rate covers all runs. std is the
// population standard deviation, so a single run reports 0.
struct RunMetrics {
    std::vector<long> steps;
    std::vector<bool> success;
    int runs{0};
    int successes{0};
    double success_rate{0.0};
    long best{0};
    double mean{std::numeric_limits<double>::quiet_NaN()};
    double stddev{std::numeric_limits<double>::quiet_NaN()};
    long planner_evals{0};
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ValidationError(where + ": unknown key '" + it.key() + "'");
    }
}

inline double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ValidationError(where + ": expected a number");
    return j.get<double>();
}

inline Vec2 get_vec2(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ValidationError(where + ": expected [x, y]");
    Vec2 v{get_number(j[0], where), get_number(j[1], where)};
    if (!v.finite()) throw ValidationError(where + ": non-finite coordinates");
    return v;
}

template <typename T>
void maybe(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    if constexpr (std::is_same_v<T, int>) {
        if (!j[key].is_number_integer()) throw ValidationError(where + "." + key + ": expected an integer");
        out = j[key].template get<int>();
    } else if constexpr (std::is_same_v<T, double>) {
        out = get_number(j[key], where + "." + key);
    } else if constexpr (std::is_same_v<T, Vec2>) {
        out = get_vec2(j[key], where + "." + key);
    }
}

inline ModelParams parse_model_params(const json& j) {
    require_keys(j, "model_params",
                 {"w_inertia", "w_lcm_attract", "w_shepherd_repel", "w_sheep_repel",
                  "w_sheep_noise", "w_shepherd_noise", "w_obstacle_repel", "r_sheep_interact",
                  "r_shepherd_detect", "r_shepherd_influence", "r_obstacle_margin", "n_neighbors",
                  "speed_sheep", "speed_shepherd", "cohesion_exponent", "band_scale",
                  "goal_radius", "max_steps"});
    ModelParams p;
    maybe(j, "w_inertia", p.w_inertia, "model_params");
    maybe(j, "w_lcm_attract", p.w_lcm_attract, "model_params");
    maybe(j, "w_shepherd_repel", p.w_shepherd_repel, "model_params");
    maybe(j, "w_sheep_repel", p.w_sheep_repel, "model_params");
    maybe(j, "w_sheep_noise", p.w_sheep_noise, "model_params");
    maybe(j, "w_shepherd_noise", p.w_shepherd_noise, "model_params");
    maybe(j, "w_obstacle_repel", p.w_obstacle_repel, "model_params");
    maybe(j, "r_sheep_interact", p.r_sheep_interact, "model_params");
    maybe(j, "r_shepherd_detect", p.r_shepherd_detect, "model_params");
    maybe(j, "r_shepherd_influence", p.r_shepherd_influence, "model_params");
    maybe(j, "r_obstacle_margin", p.r_obstacle_margin, "model_params");
    maybe(j, "n_neighbors", p.n_neighbors, "model_params");
    maybe(j, "speed_sheep", p.speed_sheep, "model_params");
    maybe(j, "speed_shepherd", p.speed_shepherd, "model_params");
    maybe(j, "cohesion_exponent", p.cohesion_exponent, "model_params");
    maybe(j, "band_scale", p.band_scale, "model_params");
    maybe(j, "goal_radius", p.goal_radius, "model_params");
    maybe(j, "max_steps", p.max_steps, "model_params");

    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ValidationError(std::string("model_params.") + name + ": must be > 0");
    };
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0)) throw ValidationError(std::string("model_params.") + name + ": must be >= 0");
    };
    nonneg(p.w_inertia, "w_inertia");
    nonneg(p.w_lcm_attract, "w_lcm_attract");
    nonneg(p.w_shepherd_repel, "w_shepherd_repel");
    nonneg(p.w_sheep_repel, "w_sheep_repel");
    nonneg(p.w_sheep_noise, "w_sheep_noise");
    nonneg(p.w_shepherd_noise, "w_shepherd_noise");
    nonneg(p.w_obstacle_repel, "w_obstacle_repel");
    positive(p.r_sheep_interact, "r_sheep_interact");
    positive(p.r_shepherd_detect, "r_shepherd_detect");
    positive(p.r_shepherd_influence, "r_shepherd_influence");
    nonneg(p.r_obstacle_margin, "r_obstacle_margin");
    positive(p.speed_sheep, "speed_sheep");
    positive(p.speed_shepherd, "speed_shepherd");
    positive(p.goal_radius, "goal_radius");
    if (j.contains("n_neighbors") && p.n_neighbors < 1)
        throw ValidationError("model_params.n_neighbors: must be >= 1");
    if (p.max_steps < 1) throw ValidationError("model_params.max_steps: must be >= 1");
    return p;
}

inline DEConfig parse_de_config(const json& j, double field_size) {
    require_keys(j, "de_config",
                 {"population_size", "generations", "waypoints", "p_best_fraction",
                  "history_size", "sigma_f", "sigma_cr", "bounds"});
    DEConfig c;
    c.upper = {field_size, field_size};
    maybe(j, "population_size", c.population_size, "de_config");
    maybe(j, "generations", c.generations, "de_config");
    maybe(j, "waypoints", c.waypoints, "de_config");
    maybe(j, "p_best_fraction", c.p_best_fraction, "de_config");
    maybe(j, "history_size", c.history_size, "de_config");
    maybe(j, "sigma_f", c.sigma_f, "de_config");
    maybe(j, "sigma_cr", c.sigma_cr, "de_config");
    if (j.contains("bounds")) {
        const auto& b = j["bounds"];
        require_keys(b, "de_config.bounds", {"lower", "upper"});
        if (b.contains("lower")) c.lower = get_vec2(b["lower"], "de_config.bounds.lower");
        if (b.contains("upper")) c.upper = get_vec2(b["upper"], "de_config.bounds.upper");
    }
    if (c.population_size < 4) throw ValidationError("de_config.population_size: must be >= 4");
    if (c.generations < 1) throw ValidationError("de_config.generations: must be >= 1");
    if (c.waypoints < 1) throw ValidationError("de_config.waypoints: must be >= 1");
    if (!(c.p_best_fraction > 0.0 && c.p_best_fraction <= 1.0))
        throw ValidationError("de_config.p_best_fraction: must be in (0, 1]");
    if (c.history_size < 1) throw ValidationError("de_config.history_size: must be >= 1");
    if (!(c.sigma_f > 0.0)) throw ValidationError("de_config.sigma_f: must be > 0");
    if (!(c.sigma_cr > 0.0)) throw ValidationError("de_config.sigma_cr: must be > 0");
    if (c.lower.x > c.upper.x || c.lower.y > c.upper.y)
        throw ValidationError("de_config.bounds: lower must not exceed upper");
    return c;
}

inline PlannerConfig parse_planner(const json& j) {
    require_keys(j, "planner",
                 {"sheep_obstacle_radius", "waypoint_tolerance", "subgoal_tolerance_factor",
                  "subgoal_tolerance_min", "p_max", "spline_boundary"});
    PlannerConfig p;
    maybe(j, "sheep_obstacle_radius", p.sheep_obstacle_radius, "planner");
    maybe(j, "waypoint_tolerance", p.waypoint_tolerance, "planner");
    maybe(j, "subgoal_tolerance_factor", p.subgoal_tolerance_factor, "planner");
    maybe(j, "subgoal_tolerance_min", p.subgoal_tolerance_min, "planner");
    if (j.contains("p_max")) {
        if (!j["p_max"].is_number_integer() || j["p_max"].get<int>() < 3)
            throw ValidationError("planner.p_max: must be an integer >= 3");
        p.p_max = j["p_max"].get<std::size_t>();
    }
    if (j.contains("spline_boundary")) {
        const std::string s = j["spline_boundary"].get<std::string>();
        if (s == "not_a_knot")
            p.boundary = SplineBoundary::NotAKnot;
        else if (s == "natural")
            p.boundary = SplineBoundary::Natural;
        else
            throw ValidationError("planner.spline_boundary: must be 'not_a_knot' or 'natural'");
    }
    if (!(p.sheep_obstacle_radius > 0.0))
        throw ValidationError("planner.sheep_obstacle_radius: must be > 0");
    if (!(p.subgoal_tolerance_factor > 0.0))
        throw ValidationError("planner.subgoal_tolerance_factor: must be > 0");
    return p;
}

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "strombom") return Algorithm::Strombom;
    if (s == "unswdst") return Algorithm::Unswdst;
    if (s == "unswdst1") return Algorithm::Unswdst1;
    throw ValidationError("algorithm: must be one of strombom, unswdst, unswdst1");
}

// Shortest round-trippable decimal representation.
inline std::string fmt_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

}  // namespace detail

// Parse and validate a scenario file. Unknown keys are rejected everywhere;
// omitted model/optimizer fields take their defaults.
inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("scenario parse error in " + path.string() + ": " + e.what());
    }

    detail::require_keys(j, "scenario",
                         {"name", "field_size", "goal", "shepherd_start", "flock_size",
                          "flock_spawn_box", "obstacles", "model_params", "de_config", "planner",
                          "algorithm", "n_runs", "base_seed"});

    ScenarioConfig s;
    s.name = j.contains("name") ? j["name"].get<std::string>() : path.stem().string();
    if (!j.contains("field_size")) throw ValidationError("field_size: required");
    s.field_size = detail::get_number(j["field_size"], "field_size");
    if (!(s.field_size > 0.0)) throw ValidationError("field_size: must be > 0");

    if (!j.contains("goal")) throw ValidationError("goal: required");
    s.goal = detail::get_vec2(j["goal"], "goal");
    if (!j.contains("shepherd_start")) throw ValidationError("shepherd_start: required");
    s.shepherd_start = detail::get_vec2(j["shepherd_start"], "shepherd_start");

    if (!j.contains("flock_size")) throw ValidationError("flock_size: required");
    if (!j["flock_size"].is_number_integer() || j["flock_size"].get<int>() < 1)
        throw ValidationError("flock_size: must be an integer >= 1");
    s.flock_size = j["flock_size"].get<int>();

    if (!j.contains("flock_spawn_box")) throw ValidationError("flock_spawn_box: required");
    const auto& box = j["flock_spawn_box"];
    detail::require_keys(box, "flock_spawn_box", {"min", "max"});
    if (!box.contains("min") || !box.contains("max"))
        throw ValidationError("flock_spawn_box: needs min and max");
    s.spawn_min = detail::get_vec2(box["min"], "flock_spawn_box.min");
    s.spawn_max = detail::get_vec2(box["max"], "flock_spawn_box.max");

    if (j.contains("obstacles")) {
        if (!j["obstacles"].is_array()) throw ValidationError("obstacles: expected an array");
        for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
            const auto& jo = j["obstacles"][i];
            const std::string where = "obstacles[" + std::to_string(i) + "]";
            detail::require_keys(jo, where, {"center", "radius"});
            if (!jo.contains("center") || !jo.contains("radius"))
                throw ValidationError(where + ": needs center and radius");
            Obstacle ob;
            ob.center = detail::get_vec2(jo["center"], where + ".center");
            ob.radius = detail::get_number(jo["radius"], where + ".radius");
            if (!(ob.radius > 0.0)) throw ValidationError(where + ".radius: must be > 0");
            s.obstacles.push_back(ob);
        }
    }

    s.model_params =
        j.contains("model_params") ? detail::parse_model_params(j["model_params"]) : ModelParams{};
    s.model_params.field_size = s.field_size;
    s.de_config = j.contains("de_config") ? detail::parse_de_config(j["de_config"], s.field_size)
                                          : [&] {
                                                DEConfig c;
                                                c.upper = {s.field_size, s.field_size};
                                                return c;
                                            }();
    s.planner = j.contains("planner") ? detail::parse_planner(j["planner"]) : PlannerConfig{};
    if (j.contains("algorithm")) s.algorithm = detail::parse_algorithm(j["algorithm"].get<std::string>());
    if (j.contains("n_runs")) {
        if (!j["n_runs"].is_number_integer() || j["n_runs"].get<int>() < 1)
            throw ValidationError("n_runs: must be an integer >= 1");
        s.n_runs = j["n_runs"].get<int>();
    }
    if (j.contains("base_seed")) s.base_seed = j["base_seed"].get<std::uint64_t>();

    // Geometry checks against the field.
    auto in_field = [&](const Vec2& v) {
        return v.x >= 0.0 && v.y >= 0.0 && v.x <= s.field_size && v.y <= s.field_size;
    };
    if (!in_field(s.goal)) throw ValidationError("goal: outside the field");
    if (!in_field(s.shepherd_start)) throw ValidationError("shepherd_start: outside the field");
    if (s.spawn_min.x > s.spawn_max.x || s.spawn_min.y > s.spawn_max.y)
        throw ValidationError("flock_spawn_box: min must not exceed max");
    if (!in_field(s.spawn_min) || !in_field(s.spawn_max))
        throw ValidationError("flock_spawn_box: outside the field");
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        const auto& ob = s.obstacles[i];
        if (ob.center.x - ob.radius < 0.0 || ob.center.y - ob.radius < 0.0 ||
            ob.center.x + ob.radius > s.field_size || ob.center.y + ob.radius > s.field_size)
            throw ValidationError("obstacles[" + std::to_string(i) + "]: outside the field");
    }
    return s;
}

// Run the scenario's seed batch (base_seed + i) and aggregate.
inline RunMetrics run_batch(const ScenarioConfig& scenario, bool record_traces = false,
                            std::vector<EpisodeResult>* episodes = nullptr) {
    RunMetrics m;
    m.runs = scenario.n_runs;
    double sum = 0.0, sum_sq = 0.0;
    long best = std::numeric_limits<long>::max();
    for (int i = 0; i < scenario.n_runs; ++i) {
        EpisodeResult r =
            run_episode(scenario, scenario.algorithm, scenario.base_seed + i, record_traces);
        m.steps.push_back(r.steps);
        m.success.push_back(r.success);
        m.planner_evals += r.planner_evals;
        if (r.success) {
            ++m.successes;
            sum += static_cast<double>(r.steps);
            sum_sq += static_cast<double>(r.steps) * static_cast<double>(r.steps);
            best = std::min(best, r.steps);
        }
        if (episodes) episodes->push_back(std::move(r));
    }
    m.success_rate = static_cast<double>(m.successes) / static_cast<double>(m.runs);
    if (m.successes > 0) {
        m.best = best;
        m.mean = sum / m.successes;
        const double var = std::max(0.0, sum_sq / m.successes - m.mean * m.mean);
        m.stddev = std::sqrt(var);
    }
    return m;
}

struct MetricsRow {
    std::string scenario;
    std::string algorithm;
    RunMetrics metrics;
};

// CSV schema v1: one row per scenario x algorithm.
inline constexpr const char* kMetricsCsvHeader =
    "scenario,algorithm,runs,successes,success_rate,best_steps,mean_steps,std_steps";

inline std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream out;
    out << kMetricsCsvHeader << "\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.algorithm << ',' << r.metrics.runs << ','
            << r.metrics.successes << ',' << detail::fmt_double(r.metrics.success_rate) << ',';
        if (r.metrics.successes > 0)
            out << r.metrics.best << ',' << detail::fmt_double(r.metrics.mean) << ','
                << detail::fmt_double(r.metrics.stddev);
        else
            out << "nan,nan,nan";
        out << "\n";
    }
    return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// One JSON object per line: t, shepherd, sheep, mode and current target.
inline std::string trace_to_jsonl(const std::vector<TraceRow>& trace) {
    std::ostringstream out;
    for (const auto& row : trace) {
        nlohmann::json j;
        j["t"] = row.t;
        j["shepherd"] = {row.shepherd.x, row.shepherd.y};
        auto sheep = nlohmann::json::array();
        for (const auto& s : row.sheep) sheep.push_back({s.x, s.y});
        j["sheep"] = std::move(sheep);
        j["mode"] = row.mode;
        j["target"] = {row.target.x, row.target.y};
        out << j.dump() << "\n";
    }
    return out.str();
}

// Write metrics.csv (always) and per-seed trace files (when episodes carry
// traces) into out_dir.
inline void emit_outputs(const std::vector<MetricsRow>& rows,
                         const std::vector<std::pair<std::uint64_t, const std::vector<TraceRow>*>>& traces,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "metrics.csv", metrics_to_csv(rows));
    for (const auto& [seed, trace] : traces) {
        if (!trace || trace->empty()) continue;
        write_file(out_dir / ("trace_" + std::to_string(seed) + ".jsonl"), trace_to_jsonl(*trace));
    }
}

// Parsed-back view of metrics.csv, used by the round-trip checks.
struct ParsedMetricsRow {
    std::string scenario;
    std::string algorithm;
    int runs;
    int successes;
    double success_rate;
    std::string best;  // kept textual: may be "nan"
    double mean;
    double stddev;
};

inline std::vector<ParsedMetricsRow> parse_metrics_csv(const std::string& csv) {
    std::vector<ParsedMetricsRow> rows;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != kMetricsCsvHeader)
        throw std::runtime_error("metrics csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ParsedMetricsRow r;
        std::string field;
        auto next = [&] {
            if (!std::getline(ls, field, ',')) throw std::runtime_error("metrics csv: short row");
            return field;
        };
        r.scenario = next();
        r.algorithm = next();
        r.runs = std::stoi(next());
        r.successes = std::stoi(next());
        r.success_rate = std::stod(next());
        r.best = next();
        r.mean = std::stod(next());
        r.stddev = std::stod(next());
        rows.push_back(std::move(r));
    }
    return rows;
}

// The two bundled experiment matrices: scenario file stems and the algorithm
// pair each one is run with.
inline std::vector<std::pair<std::string, std::vector<Algorithm>>> table_matrix(int table) {
    using A = Algorithm;
    if (table == 1)
        return {
            {"tab1_n10", {A::Strombom, A::Unswdst}},
            {"tab1_n50", {A::Strombom, A::Unswdst}},
            {"tab1_n100", {A::Strombom, A::Unswdst}},
        };
    if (table == 2)
        return {
            {"tab2_6small_n20", {A::Unswdst, A::Unswdst1}},
            {"tab2_6small_n40", {A::Unswdst, A::Unswdst1}},
            {"tab2_6small_n80", {A::Unswdst, A::Unswdst1}},
            {"tab2_6large_n20", {A::Unswdst, A::Unswdst1}},
            {"tab2_6large_n40", {A::Unswdst, A::Unswdst1}},
            {"tab2_6large_n80", {A::Unswdst, A::Unswdst1}},
            {"tab2_13large_n20", {A::Unswdst, A::Unswdst1}},
            {"tab2_13large_n40", {A::Unswdst, A::Unswdst1}},
            {"tab2_13large_n60", {A::Unswdst, A::Unswdst1}},
        };
    throw ValidationError("table: must be 1 or 2");
}

}  // namespace shepherd
