#include <gtest/gtest.h>

#include <fmcwsar/config.hpp>

#include <filesystem>

using namespace fmcwsar;

namespace {

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("fmcwsar_cfg_" + name)).string();
}

}  // namespace

TEST(Config, DefaultsAreDeskScale) {
    const PipelineConfig c = config_from_json(json::object());
    EXPECT_EQ(c.radar.num_chirps, 64u);
    EXPECT_EQ(c.radar.num_rx, 4u);
    EXPECT_EQ(c.radar.num_samples, 128u);
    EXPECT_EQ(scene_spec(c).nx, 101u);
    EXPECT_EQ(scene_spec(c).ny, 101u);
}

TEST(Config, RoundTripIsIdentity) {
    PipelineConfig c;
    c.radar = full_scale_params();
    c.trajectory.kind = TrajectoryKind::Arc;
    c.trajectory.radius = 12.5;
    c.trajectory.speed = 7.25;
    c.trajectory.heading = {0.6, 0.8};
    c.array.rx_spacing = 0.0021;
    c.scene = {{{0.1, 2.0}, 0.5, 1.25}, {{-0.3, 3.3}, 2.0, 0.0}};
    c.simulation = {{WindowFamily::Kaiser, 6.5}, 8, 0.125};
    c.grid.polar_oversample = 3.0;
    c.algo = Algorithm::Optimized;
    c.measures = {true, false, false, true, std::vector<std::size_t>{0, 3, 5}};
    c.sar_window = {WindowFamily::Rectangular, 4.0};
    c.seed = 987654321987ull;
    c.regions.signal = {{"a", {0, 1, 2, 3}}};
    c.regions.noise = RegionSpec{"n", {-1, -1, 0.5, 0.25}};
    c.outputs.image = "x.sarim";
    const auto j = to_json(c);
    const auto back = config_from_json(json::parse(j.dump()));
    EXPECT_TRUE(back == c);
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(j["radar"]["f0_hz"], 76.6e9);
    EXPECT_EQ(j["radar"]["sample_rate_hz"], 10e6);
}

TEST(Config, RadarKeysAndDerivedSampleRate) {
    const auto c = config_from_json(json::parse(R"({"radar": {"num_samples": 256, "num_rx": 2}})"));
    EXPECT_DOUBLE_EQ(c.radar.sample_rate, 256 / 102.4e-6);
    EXPECT_EQ(c.radar.num_rx, 2u);
}

TEST(Config, Rejections) {
    auto bad = [](const char* text) { return config_from_json(json::parse(text)); };
    EXPECT_THROW(bad(R"({"radr": {}})"), ConfigError);
    EXPECT_THROW(bad(R"({"radar": {"f0": 1}})"), ConfigError);
    EXPECT_THROW(bad(R"({"radar": {"num_samples": 100, "sample_rate_hz": 1e6}})"), ConfigError);
    EXPECT_THROW(bad(R"({"algo": "fast"})"), ConfigError);
    EXPECT_THROW(bad(R"({"algo": "optimized"})"), ConfigError);
    EXPECT_THROW(bad(R"({"measures": {"polar_grid": true}, "grid": {"polar_oversample": 1.5}})"), ConfigError);
    EXPECT_THROW(bad(R"({"measures": {"rx_subset": [0, 9]}})"), ConfigError);
    EXPECT_THROW(bad(R"({"trajectory": {"type": "helix"}})"), ConfigError);
    EXPECT_THROW(bad(R"({"trajectory": {"type": "file", "file": "/no/such/poses.csv"}})"), ConfigError);
    EXPECT_THROW(bad(R"({"seed": "abc"})"), ConfigError);
    EXPECT_THROW(bad(R"({"scene": {"scatterers": [{"x": 1}]}})"), ConfigError);
    EXPECT_THROW(bad(R"({"window": {"family": "hamming"}})"), ConfigError);
    EXPECT_THROW(load_config("/no/such/config.json"), ConfigError);
}

TEST(Config, OptimizedForcesKernelMeasures) {
    const auto c =
        config_from_json(json::parse(R"({"algo": "optimized", "measures": {"window_vector": true}})"));
    const auto m = effective_measures(c);
    EXPECT_TRUE(m.window_vector && m.math_opt && m.doppler_precompute);
    EXPECT_FALSE(m.polar_grid);
    const auto r = config_from_json(json::parse(R"({"measures": {"math_opt": true}})"));
    EXPECT_TRUE(effective_measures(r).math_opt);
    EXPECT_FALSE(effective_measures(r).doppler_precompute);
}

TEST(Config, PoseFileRoundTripAndRelativePath) {
    PipelineConfig c;
    const auto traj = arc_pass(c.radar, 8.0, 10.0, {0.5, 0.0}, {1, 0});
    const auto dir = std::filesystem::temp_directory_path() / "fmcwsar_cfg_dir";
    std::filesystem::create_directories(dir);
    write_pose_file((dir / "poses.csv").string(), traj);
    {
        std::ofstream f(dir / "cfg.json");
        f << R"({"trajectory": {"type": "file", "file": "poses.csv"}})";
    }
    const auto loaded = load_config((dir / "cfg.json").string());
    const auto t = build_trajectory(loaded);
    ASSERT_EQ(t.size(), traj.size());
    for (std::size_t m = 0; m < t.size(); ++m) {
        EXPECT_EQ(t.poses[m], traj.poses[m]);
        EXPECT_EQ(t.velocities[m], traj.velocities[m]);
    }
    // Wrong chirp count in the file is a config error.
    auto short_cfg = loaded;
    short_cfg.radar = scaled_params(32, 4, 128);
    EXPECT_THROW(build_trajectory(short_cfg), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST(Config, SaveAndLoad) {
    PipelineConfig c;
    c.seed = 77;
    const auto path = tmp("save.json");
    save_config(path, c);
    EXPECT_TRUE(load_config(path) == c);
    std::filesystem::remove(path);
}
