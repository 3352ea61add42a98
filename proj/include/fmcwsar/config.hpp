#pragma once

// JSON pipeline configuration. Every object rejects unknown keys; every field is optional
// and falls back to the defaults below. Serialising a loaded config and loading it again
// gives back an identical config.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "backprojection.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "radar.hpp"
#include "simulator.hpp"
#include "window.hpp"

namespace fmcwsar {

using json = nlohmann::json;

enum class TrajectoryKind { Straight, Accelerating, Arc, File };
enum class Algorithm { Reference, Optimized };

struct TrajectoryConfig {
    TrajectoryKind kind = TrajectoryKind::Straight;
    double speed = 10.0;   ///< straight, arc [m/s]
    double v0 = 9.61;      ///< accelerating, first chirp [m/s]
    double v1 = 10.39;     ///< accelerating, last chirp [m/s]
    double radius = 50.0;  ///< arc [m]
    Vec2 centre;
    Vec2 heading{1, 0};
    std::string file;      ///< per-chirp CSV: x,y,vx,vy,hx,hy

    friend bool operator==(const TrajectoryConfig&, const TrajectoryConfig&) = default;
};

struct ArrayConfig {
    double rx_spacing = 0;  ///< 0 selects half a wavelength
    Vec2 tx_offset;

    friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;
};

struct ScatterConfig {
    Vec2 position;
    double amplitude = 1.0;
    double phase = 0.0;  ///< [rad]

    friend bool operator==(const ScatterConfig&, const ScatterConfig&) = default;
};

struct SimulationConfig {
    Taper range_window{WindowFamily::Rectangular, 4.0};
    std::size_t zero_pad = 1;
    double noise_sigma = 0;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Scene rectangle on a Cartesian grid; the polar grid (if enabled) is fitted around it.
struct GridConfig {
    Vec2 origin{-1.25, 3.0};
    double extent_x = 2.5;
    double extent_y = 2.5;
    double resolution = 0.025;
    double polar_oversample = 2.5;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct RegionsConfig {
    std::vector<RegionSpec> signal;
    std::optional<RegionSpec> noise;

    friend bool operator==(const RegionsConfig&, const RegionsConfig&) = default;
};

struct OutputsConfig {
    std::string spectrum = "spectrum.sarbp";
    std::string image = "image.sarim";

    friend bool operator==(const OutputsConfig&, const OutputsConfig&) = default;
};

struct PipelineConfig {
    RadarParams radar = scaled_params(64, 4, 128);
    TrajectoryConfig trajectory;
    ArrayConfig array;
    std::vector<ScatterConfig> scene{{{0.0, 4.25}, 1.0, 0.0}};
    SimulationConfig simulation;
    GridConfig grid;
    Algorithm algo = Algorithm::Reference;
    OptimizationConfig measures;
    Taper sar_window{WindowFamily::Hann, 4.0};
    std::uint64_t seed = 1;
    RegionsConfig regions;
    OutputsConfig outputs;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

inline std::string to_string(TrajectoryKind k) {
    switch (k) {
        case TrajectoryKind::Straight: return "straight";
        case TrajectoryKind::Accelerating: return "accelerating";
        case TrajectoryKind::Arc: return "arc";
        case TrajectoryKind::File: return "file";
    }
    return "?";
}

inline std::string to_string(Algorithm a) { return a == Algorithm::Reference ? "reference" : "optimized"; }

/// Kernel measures actually used: "optimized" switches on the index constants and the
/// Doppler table and needs the per-chirp window vector.
inline OptimizationConfig effective_measures(const PipelineConfig& c) {
    OptimizationConfig m = c.measures;
    if (c.algo == Algorithm::Optimized) {
        if (!m.window_vector) throw ConfigError("algo 'optimized' requires measures.window_vector = true");
        m.math_opt = true;
        m.doppler_precompute = true;
    }
    return m;
}

/// Semantic checks beyond what parsing enforces.
inline void validate(const PipelineConfig& c) {
    try {
        validate(c.radar);
        validate(c.simulation.range_window);
        validate(c.sar_window);
        if (c.measures.rx_subset) validate_rx_subset(*c.measures.rx_subset, c.radar.num_rx);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.simulation.zero_pad < 1) throw ConfigError("simulation.range_zero_pad must be >= 1");
    if (!(c.simulation.noise_sigma >= 0)) throw ConfigError("simulation.noise_sigma must be >= 0");
    if (!(c.grid.extent_x > 0 && c.grid.extent_y > 0)) throw ConfigError("grid extents must be > 0");
    if (!(c.grid.resolution > 0)) throw ConfigError("grid.resolution_m must be > 0");
    if (c.measures.polar_grid && !(c.grid.polar_oversample >= 2.0)) {
        throw ConfigError("grid.polar_oversample must be >= 2 (got " + std::to_string(c.grid.polar_oversample) + ")");
    }
    if (!(c.array.rx_spacing >= 0)) throw ConfigError("array.rx_spacing_m must be >= 0");
    const auto& t = c.trajectory;
    switch (t.kind) {
        case TrajectoryKind::Straight:
            if (!(t.speed >= 0)) throw ConfigError("trajectory.speed_mps must be >= 0");
            break;
        case TrajectoryKind::Accelerating:
            if (!(t.v0 >= 0 && t.v1 >= 0)) throw ConfigError("trajectory speeds must be >= 0");
            break;
        case TrajectoryKind::Arc:
            if (!(t.radius > 0)) throw ConfigError("trajectory.radius_m must be > 0");
            if (!(t.speed >= 0)) throw ConfigError("trajectory.speed_mps must be >= 0");
            break;
        case TrajectoryKind::File:
            if (t.file.empty()) throw ConfigError("trajectory.file must name a pose file");
            if (!std::filesystem::exists(t.file)) throw ConfigError("trajectory file '" + t.file + "' does not exist");
            break;
    }
    if (t.kind != TrajectoryKind::File && !(norm(t.heading) > 0)) throw ConfigError("trajectory.heading must be non-zero");
    for (const auto& s : c.scene) {
        if (!(s.amplitude > 0)) throw ConfigError("scene scatterer amplitude must be > 0");
    }
    (void)effective_measures(c);
}

namespace detail {

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline json vec_json(const Vec2& v) { return json::array({v.x, v.y}); }

inline Vec2 vec_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(what + " must be a [x, y] array");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline void get_vec(const json& j, const char* key, Vec2& out) {
    if (j.contains(key)) out = vec_from(j.at(key), key);
}

inline json taper_json(const Taper& t) { return {{"family", to_string(t.family)}, {"beta", t.beta}}; }

inline Taper taper_from(const json& j, const std::string& where, Taper t) {
    only_keys(j, where, {"family", "beta"});
    if (j.contains("family")) {
        try {
            t.family = window_family_from_string(j.at("family").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    get_if(j, "beta", t.beta);
    return t;
}

inline json region_json(const RegionSpec& r) {
    return {{"name", r.name}, {"x0", r.rect.x0}, {"y0", r.rect.y0}, {"x1", r.rect.x1}, {"y1", r.rect.y1}};
}

inline RegionSpec region_from(const json& j) {
    only_keys(j, "region", {"name", "x0", "y0", "x1", "y1"});
    RegionSpec r;
    get_if(j, "name", r.name);
    for (const char* k : {"x0", "y0", "x1", "y1"}) {
        if (!j.contains(k)) throw ConfigError(std::string("region is missing '") + k + "'");
    }
    r.rect = {j["x0"].get<double>(), j["y0"].get<double>(), j["x1"].get<double>(), j["y1"].get<double>()};
    return r;
}

}  // namespace detail

inline json to_json(const PipelineConfig& c) {
    json j;
    j["radar"] = {{"f0_hz", c.radar.f0},
                  {"bandwidth_hz", c.radar.bandwidth},
                  {"chirp_duration_s", c.radar.chirp_duration},
                  {"pri_s", c.radar.pri},
                  {"num_chirps", c.radar.num_chirps},
                  {"num_rx", c.radar.num_rx},
                  {"num_samples", c.radar.num_samples},
                  {"sample_rate_hz", c.radar.sample_rate}};
    const auto& t = c.trajectory;
    json tj{{"type", to_string(t.kind)}};
    switch (t.kind) {
        case TrajectoryKind::Straight: tj["speed_mps"] = t.speed; break;
        case TrajectoryKind::Accelerating:
            tj["v0_mps"] = t.v0;
            tj["v1_mps"] = t.v1;
            break;
        case TrajectoryKind::Arc:
            tj["radius_m"] = t.radius;
            tj["speed_mps"] = t.speed;
            break;
        case TrajectoryKind::File: tj["file"] = t.file; break;
    }
    if (t.kind != TrajectoryKind::File) {
        tj["centre"] = detail::vec_json(t.centre);
        tj["heading"] = detail::vec_json(t.heading);
    }
    j["trajectory"] = tj;
    j["array"] = {{"rx_spacing_m", c.array.rx_spacing}, {"tx_offset", detail::vec_json(c.array.tx_offset)}};
    json sc = json::array();
    for (const auto& s : c.scene) {
        sc.push_back({{"x", s.position.x}, {"y", s.position.y}, {"amplitude", s.amplitude}, {"phase_rad", s.phase}});
    }
    j["scene"] = {{"scatterers", sc}};
    j["simulation"] = {{"range_window", detail::taper_json(c.simulation.range_window)},
                       {"range_zero_pad", c.simulation.zero_pad},
                       {"noise_sigma", c.simulation.noise_sigma}};
    j["grid"] = {{"origin", detail::vec_json(c.grid.origin)},
                 {"extent_x_m", c.grid.extent_x},
                 {"extent_y_m", c.grid.extent_y},
                 {"resolution_m", c.grid.resolution},
                 {"polar_oversample", c.grid.polar_oversample}};
    j["algo"] = to_string(c.algo);
    json mj{{"window_vector", c.measures.window_vector},
            {"math_opt", c.measures.math_opt},
            {"doppler_precompute", c.measures.doppler_precompute},
            {"polar_grid", c.measures.polar_grid}};
    mj["rx_subset"] = c.measures.rx_subset ? json(*c.measures.rx_subset) : json(nullptr);
    j["measures"] = mj;
    j["window"] = detail::taper_json(c.sar_window);
    j["seed"] = c.seed;
    json rj{{"signal", json::array()}};
    for (const auto& r : c.regions.signal) rj["signal"].push_back(detail::region_json(r));
    rj["noise"] = c.regions.noise ? detail::region_json(*c.regions.noise) : json(nullptr);
    j["regions"] = rj;
    j["outputs"] = {{"spectrum", c.outputs.spectrum}, {"image", c.outputs.image}};
    return j;
}

/// Parses and validates. Relative trajectory files are resolved against `base_dir`.
inline PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    PipelineConfig c;
    try {
        detail::only_keys(j, "config", {"radar", "trajectory", "array", "scene", "simulation", "grid", "algo",
                                        "measures", "window", "seed", "regions", "outputs"});
        if (j.contains("radar")) {
            const auto& r = j["radar"];
            detail::only_keys(r, "radar", {"f0_hz", "bandwidth_hz", "chirp_duration_s", "pri_s", "num_chirps",
                                           "num_rx", "num_samples", "sample_rate_hz"});
            detail::get_if(r, "f0_hz", c.radar.f0);
            detail::get_if(r, "bandwidth_hz", c.radar.bandwidth);
            detail::get_if(r, "chirp_duration_s", c.radar.chirp_duration);
            detail::get_if(r, "pri_s", c.radar.pri);
            detail::get_if(r, "num_chirps", c.radar.num_chirps);
            detail::get_if(r, "num_rx", c.radar.num_rx);
            detail::get_if(r, "num_samples", c.radar.num_samples);
            if (r.contains("sample_rate_hz")) {
                c.radar.sample_rate = r["sample_rate_hz"].get<double>();
            } else {
                c.radar.sample_rate = static_cast<double>(c.radar.num_samples) / c.radar.chirp_duration;
            }
        }
        if (j.contains("trajectory")) {
            const auto& t = j["trajectory"];
            detail::only_keys(t, "trajectory",
                              {"type", "speed_mps", "v0_mps", "v1_mps", "radius_m", "centre", "heading", "file"});
            const std::string type = t.value("type", std::string("straight"));
            if (type == "straight") {
                c.trajectory.kind = TrajectoryKind::Straight;
            } else if (type == "accelerating") {
                c.trajectory.kind = TrajectoryKind::Accelerating;
            } else if (type == "arc") {
                c.trajectory.kind = TrajectoryKind::Arc;
            } else if (type == "file") {
                c.trajectory.kind = TrajectoryKind::File;
            } else {
                throw ConfigError("unknown trajectory type '" + type + "'");
            }
            detail::get_if(t, "speed_mps", c.trajectory.speed);
            detail::get_if(t, "v0_mps", c.trajectory.v0);
            detail::get_if(t, "v1_mps", c.trajectory.v1);
            detail::get_if(t, "radius_m", c.trajectory.radius);
            detail::get_vec(t, "centre", c.trajectory.centre);
            detail::get_vec(t, "heading", c.trajectory.heading);
            if (t.contains("file")) {
                std::filesystem::path p = t["file"].get<std::string>();
                if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
                c.trajectory.file = p.string();
            }
        }
        if (j.contains("array")) {
            const auto& a = j["array"];
            detail::only_keys(a, "array", {"rx_spacing_m", "tx_offset"});
            detail::get_if(a, "rx_spacing_m", c.array.rx_spacing);
            detail::get_vec(a, "tx_offset", c.array.tx_offset);
        }
        if (j.contains("scene")) {
            const auto& s = j["scene"];
            detail::only_keys(s, "scene", {"scatterers"});
            c.scene.clear();
            for (const auto& e : s.value("scatterers", json::array())) {
                detail::only_keys(e, "scatterer", {"x", "y", "amplitude", "phase_rad"});
                if (!e.contains("x") || !e.contains("y")) throw ConfigError("scatterer needs 'x' and 'y'");
                ScatterConfig sc;
                sc.position = {e["x"].get<double>(), e["y"].get<double>()};
                detail::get_if(e, "amplitude", sc.amplitude);
                detail::get_if(e, "phase_rad", sc.phase);
                c.scene.push_back(sc);
            }
        }
        if (j.contains("simulation")) {
            const auto& s = j["simulation"];
            detail::only_keys(s, "simulation", {"range_window", "range_zero_pad", "noise_sigma"});
            if (s.contains("range_window")) {
                c.simulation.range_window =
                    detail::taper_from(s["range_window"], "simulation.range_window", c.simulation.range_window);
            }
            detail::get_if(s, "range_zero_pad", c.simulation.zero_pad);
            detail::get_if(s, "noise_sigma", c.simulation.noise_sigma);
        }
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            detail::only_keys(g, "grid", {"origin", "extent_x_m", "extent_y_m", "resolution_m", "polar_oversample"});
            detail::get_vec(g, "origin", c.grid.origin);
            detail::get_if(g, "extent_x_m", c.grid.extent_x);
            detail::get_if(g, "extent_y_m", c.grid.extent_y);
            detail::get_if(g, "resolution_m", c.grid.resolution);
            detail::get_if(g, "polar_oversample", c.grid.polar_oversample);
        }
        if (j.contains("algo")) {
            const auto a = j["algo"].get<std::string>();
            if (a == "reference") {
                c.algo = Algorithm::Reference;
            } else if (a == "optimized") {
                c.algo = Algorithm::Optimized;
            } else {
                throw ConfigError("algo must be 'reference' or 'optimized', got '" + a + "'");
            }
        }
        if (j.contains("measures")) {
            const auto& m = j["measures"];
            detail::only_keys(m, "measures",
                              {"window_vector", "math_opt", "doppler_precompute", "polar_grid", "rx_subset"});
            detail::get_if(m, "window_vector", c.measures.window_vector);
            detail::get_if(m, "math_opt", c.measures.math_opt);
            detail::get_if(m, "doppler_precompute", c.measures.doppler_precompute);
            detail::get_if(m, "polar_grid", c.measures.polar_grid);
            if (m.contains("rx_subset") && !m["rx_subset"].is_null()) {
                c.measures.rx_subset = m["rx_subset"].get<std::vector<std::size_t>>();
            }
        }
        if (j.contains("window")) c.sar_window = detail::taper_from(j["window"], "window", c.sar_window);
        detail::get_if(j, "seed", c.seed);
        if (j.contains("regions")) {
            const auto& r = j["regions"];
            detail::only_keys(r, "regions", {"signal", "noise"});
            for (const auto& e : r.value("signal", json::array())) c.regions.signal.push_back(detail::region_from(e));
            if (r.contains("noise") && !r["noise"].is_null()) c.regions.noise = detail::region_from(r["noise"]);
        }
        if (j.contains("outputs")) {
            const auto& o = j["outputs"];
            detail::only_keys(o, "outputs", {"spectrum", "image"});
            detail::get_if(o, "spectrum", c.outputs.spectrum);
            detail::get_if(o, "image", c.outputs.image);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

inline PipelineConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j, std::filesystem::path(path).parent_path());
}

inline void save_config(const std::string& path, const PipelineConfig& c) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f << to_json(c).dump(2) << '\n';
}

// ---------------------------------------------------------------------------

/// Reads a per-chirp pose file: one "x,y,vx,vy,hx,hy" line per chirp. Blank lines,
/// lines starting with '#', and a non-numeric header line are skipped.
inline Trajectory read_pose_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open trajectory file '" + path + "'");
    Trajectory t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (t.poses.empty() && lineno == 1) continue;
            throw DataError(path + ":" + std::to_string(lineno) + ": non-numeric field");
        }
        if (v.size() != 6) throw DataError(path + ":" + std::to_string(lineno) + ": expected 6 fields");
        t.poses.push_back({v[0], v[1]});
        t.velocities.push_back({v[2], v[3]});
        t.headings.push_back({v[4], v[5]});
    }
    return t;
}

inline void write_pose_file(const std::string& path, const Trajectory& t) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f.precision(17);
    f << "x,y,vx,vy,hx,hy\n";
    for (std::size_t m = 0; m < t.size(); ++m) {
        f << t.poses[m].x << ',' << t.poses[m].y << ',' << t.velocities[m].x << ',' << t.velocities[m].y << ','
          << t.headings[m].x << ',' << t.headings[m].y << '\n';
    }
}

inline Trajectory build_trajectory(const PipelineConfig& c) {
    const auto& t = c.trajectory;
    Trajectory traj;
    switch (t.kind) {
        case TrajectoryKind::Straight: traj = straight_pass(c.radar, t.speed, t.centre, t.heading); break;
        case TrajectoryKind::Accelerating: traj = accelerating_pass(c.radar, t.v0, t.v1, t.centre, t.heading); break;
        case TrajectoryKind::Arc: traj = arc_pass(c.radar, t.radius, t.speed, t.centre, t.heading); break;
        case TrajectoryKind::File: traj = read_pose_file(t.file); break;
    }
    try {
        validate(traj, c.radar);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("trajectory: ") + e.what());
    }
    return traj;
}

inline ArrayGeometry build_array(const PipelineConfig& c) {
    const double spacing = c.array.rx_spacing > 0 ? c.array.rx_spacing : 0.5 * derived_waveform(c.radar).wavelength;
    return uniform_linear_array(c.radar.num_rx, spacing, c.array.tx_offset);
}

inline std::vector<PointScatterer> build_scene(const PipelineConfig& c) {
    std::vector<PointScatterer> out;
    for (const auto& s : c.scene) out.push_back({s.position, std::polar(s.amplitude, s.phase)});
    return out;
}

inline CartesianSpec scene_spec(const PipelineConfig& c) {
    return cartesian_grid(c.grid.extent_x, c.grid.extent_y, c.grid.resolution, c.grid.origin).cartesian();
}

}  // namespace fmcwsar
