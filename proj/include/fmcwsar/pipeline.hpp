#pragma once

// End-to-end pipelines built from a PipelineConfig: simulate a beat spectrum, then
// reconstruct it with the configured measures applied in order
// rx subset -> grid -> window / Doppler table -> kernel.

#include <chrono>
#include <string>
#include <vector>

#include "backprojection.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "metrics.hpp"
#include "simulator.hpp"

namespace fmcwsar {

struct Scenario {
    RadarParams params;
    Trajectory traj;
    ArrayGeometry geom;
};

inline Scenario build_scenario(const PipelineConfig& c) { return {c.radar, build_trajectory(c), build_array(c)}; }

/// Simulated, range-compressed and (if configured) noisy beat spectrum.
inline BeatSpectrum simulate(const PipelineConfig& c, Execution exec = {}) {
    validate(c);
    if (c.scene.empty()) throw ConfigError("scene must contain at least one scatterer");
    const Scenario s = build_scenario(c);
    const auto scene = build_scene(c);
    auto spectrum = simulate_spectrum(s.params, s.traj, s.geom, scene, c.simulation.range_window,
                                      c.simulation.zero_pad, exec);
    return add_noise(std::move(spectrum), c.simulation.noise_sigma, c.seed);
}

/// Reconstruction grid: the Cartesian scene grid, or a polar grid around the aperture
/// centre covering it.
inline ImageGrid reconstruction_grid(const PipelineConfig& c, const Trajectory& traj, bool polar) {
    const CartesianSpec scene = scene_spec(c);
    if (!polar) return ImageGrid(scene);
    const Vec2 centre = aperture_centre(traj);
    try {
        return polar_grid(c.radar, aperture_length(traj), polar_cover(scene, centre), c.grid.polar_oversample, centre);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

/// Everything the kernel needs, plus the grid it runs on.
struct PreparedRun {
    ImageGrid grid;
    StagedInputs staged;

    std::uint64_t bytes() const { return staged.bytes(); }
};

/// The "load" phase: applies the rx subset, builds the grid, window and Doppler table,
/// and stages the kernel inputs.
inline PreparedRun prepare(const PipelineConfig& c, const OptimizationConfig& measures, const BeatSpectrum& spectrum,
                           const Scenario& scenario) {
    if (spectrum.num_chirps != c.radar.num_chirps || spectrum.num_rx != c.radar.num_rx) {
        throw DataError("data has " + std::to_string(spectrum.num_chirps) + " chirps x " +
                        std::to_string(spectrum.num_rx) + " RX, config expects " + std::to_string(c.radar.num_chirps) +
                        " x " + std::to_string(c.radar.num_rx));
    }
    RadarParams params = scenario.params;
    ArrayGeometry geom = scenario.geom;
    const BeatSpectrum* data = &spectrum;
    BeatSpectrum subset;
    if (measures.rx_subset) {
        subset = select_rx_subset(spectrum, *measures.rx_subset);
        geom = select_rx_subset(geom, *measures.rx_subset);
        params = select_rx_subset(params, *measures.rx_subset);
        data = &subset;
    }
    ImageGrid grid = reconstruction_grid(c, scenario.traj, measures.polar_grid);
    const KernelFlags flags = kernel_flags(measures);
    const WindowSpec wspec{c.sar_window, flags.window_vector ? WindowForm::PerChirpVector : WindowForm::FullMatrix};
    WindowValues window = make_window(wspec, grid, scenario.traj);
    std::optional<DopplerTable> doppler;
    if (flags.doppler == DopplerMode::Precomputed) {
        doppler = precompute_doppler_index(grid, scenario.traj, geom, params, data->f_step);
    }
    StagedInputs staged = stage_inputs(*data, scenario.traj, geom, grid, params, flags, std::move(window),
                                       doppler ? &*doppler : nullptr);
    return {std::move(grid), std::move(staged)};
}

struct Reconstruction {
    SarImage image;
    OptimizationConfig measures;
    std::uint64_t bytes_prepared = 0;
    double load_s = 0;
    double bp_s = 0;
    KernelStats stats;
};

inline Reconstruction reconstruct(const PipelineConfig& c, const OptimizationConfig& measures,
                                  const BeatSpectrum& spectrum, Execution exec = {}) {
    using clock = std::chrono::steady_clock;
    const Scenario scenario = build_scenario(c);
    const auto t0 = clock::now();
    const PreparedRun run = prepare(c, measures, spectrum, scenario);
    const auto t1 = clock::now();
    KernelStats stats;
    SarImage image = backproject(run.staged, run.grid, exec, &stats);
    const auto t2 = clock::now();
    return {std::move(image), measures, run.bytes(), std::chrono::duration<double>(t1 - t0).count(),
            std::chrono::duration<double>(t2 - t1).count(), std::move(stats)};
}

inline Reconstruction reconstruct(const PipelineConfig& c, const BeatSpectrum& spectrum, Execution exec = {}) {
    return reconstruct(c, effective_measures(c), spectrum, exec);
}

/// Every other receiver: 0, 2, 4, ...
inline std::vector<std::size_t> alternate_rx(std::size_t num_rx) {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < num_rx; n += 2) out.push_back(n);
    return out;
}

struct BenchCase {
    std::string label;
    OptimizationConfig measures;
};

/// One row per measure applied alone to the reference, plus all measures combined.
inline std::vector<BenchCase> bench_matrix(const PipelineConfig& c) {
    const auto rx = alternate_rx(c.radar.num_rx);
    OptimizationConfig comb{true, true, true, true, rx};
    return {{"ref", {}},
            {"w_sar", {true, false, false, false, std::nullopt}},
            {"opt", {false, true, false, false, std::nullopt}},
            {"doppler", {false, false, true, false, std::nullopt}},
            {"polar", {false, false, false, true, std::nullopt}},
            {"rx", {false, false, false, false, rx}},
            {"comb", comb}};
}

inline BenchReport bench_case(const PipelineConfig& c, const BenchCase& bc, const BeatSpectrum& spectrum,
                              std::size_t repetitions, Execution exec = {}) {
    const Scenario scenario = build_scenario(c);
    return run_benchmark(
        bc.label, repetitions, [&] { return prepare(c, bc.measures, spectrum, scenario); },
        [&](const PreparedRun& run) { return backproject(run.staged, run.grid, exec); });
}

}  // namespace fmcwsar
