#pragma once

// Back-projection image formation.
//
// One kernel template covers the standard algorithm and every combination of the
// optimisation measures: per-chirp window vector instead of a per-pixel window matrix,
// precomputed index constants, and a per-pixel Doppler table instead of per-contribution
// radial speeds. The pixel loop is data parallel; each pixel is summed chirp-major,
// antenna-minor in double precision and stored as float, so the image is bit-identical
// for any thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "radar.hpp"
#include "simulator.hpp"
#include "window.hpp"

namespace fmcwsar {

enum class WindowForm {
    FullMatrix,     ///< one weight per (pixel, chirp)
    PerChirpVector  ///< one weight per chirp
};

struct WindowSpec {
    Taper taper;
    WindowForm form = WindowForm::FullMatrix;
};

struct WindowValues {
    WindowForm form = WindowForm::PerChirpVector;
    std::size_t num_pixels = 0;  ///< 0 for the vector form
    std::size_t num_chirps = 0;
    std::vector<float> values;

    float at(std::size_t pixel, std::size_t m) const {
        return form == WindowForm::FullMatrix ? values[pixel * num_chirps + m] : values[m];
    }
    std::uint64_t bytes() const { return static_cast<std::uint64_t>(values.size()) * sizeof(float); }
};

/// Normalised along-track arc length of every pose, in [0, 1].
inline std::vector<double> arc_length_abscissa(const Trajectory& traj) {
    const std::size_t n = traj.size();
    std::vector<double> u(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) u[m] = u[m - 1] + distance(traj.poses[m], traj.poses[m - 1]);
    const double total = n > 1 ? u.back() : 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        u[m] = total > 0 ? u[m] / total : (n > 1 ? static_cast<double>(m) / static_cast<double>(n - 1) : 0.0);
    }
    return u;
}

/// Aperture weights. The vector form samples the taper equidistantly in chirp number.
/// The matrix form samples it at each pose's normalised arc length, which is
/// non-equidistant under varying speed; every pixel row holds the same weights. A
/// single chirp always gets weight 1.
inline WindowValues make_window(const WindowSpec& spec, const ImageGrid& grid, const Trajectory& traj) {
    validate(spec.taper);
    const std::size_t nm = traj.size();
    if (nm == 0) throw std::invalid_argument("make_window: empty trajectory");
    WindowValues w{spec.form, 0, nm, {}};
    std::vector<double> row(nm, 1.0);
    if (nm > 1) {
        if (spec.form == WindowForm::PerChirpVector) {
            row = sample_taper(spec.taper, nm);
        } else {
            const auto u = arc_length_abscissa(traj);
            for (std::size_t m = 0; m < nm; ++m) row[m] = evaluate(spec.taper, u[m]);
        }
    }
    double sum = 0;
    for (double v : row) sum += v;
    if (!(sum > 0)) throw std::invalid_argument("make_window: window weights sum to zero");

    if (spec.form == WindowForm::PerChirpVector) {
        w.values.assign(row.begin(), row.end());
    } else {
        w.num_pixels = grid.size();
        w.values.resize(grid.size() * nm);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            for (std::size_t m = 0; m < nm; ++m) w.values[p * nm + m] = static_cast<float>(row[m]);
        }
    }
    return w;
}

/// Per-pixel Doppler offset, in fractional bins, from the mean platform velocity.
struct DopplerTable {
    std::vector<float> bins;
    Vec2 v_avg;
    Vec2 phase_centre;                  ///< mean TX/RX midpoint over the aperture
    std::vector<std::size_t> flagged;   ///< pixels coincident with phase_centre (entry 0)

    std::uint64_t bytes() const { return static_cast<std::uint64_t>(bins.size()) * sizeof(float); }
};

/// Mean over chirps of the midpoint between the TX and the mean RX position.
inline Vec2 aperture_phase_centre(const Trajectory& traj, const ArrayGeometry& geom) {
    Vec2 acc;
    const std::size_t nrx = geom.rx_offsets.size();
    for (std::size_t m = 0; m < traj.size(); ++m) {
        Vec2 rx_mean;
        for (std::size_t n = 0; n < nrx; ++n) rx_mean += antenna_positions(traj, geom, m, n).rx;
        rx_mean *= 1.0 / static_cast<double>(nrx);
        acc += 0.5 * (tx_position(traj, geom, m) + rx_mean);
    }
    return acc * (1.0 / static_cast<double>(traj.size()));
}

/// v_r(p) = 2 <p - q, v_avg> / |p - q| (TX and RX treated as co-located at q), converted
/// to bins: f0 * v_r / c / f_step.
inline DopplerTable precompute_doppler_index(const ImageGrid& grid, const Trajectory& traj,
                                             const ArrayGeometry& geom, const RadarParams& params, double f_step) {
    validate(traj, params);
    validate(geom, params);
    if (!(f_step > 0)) throw std::invalid_argument("precompute_doppler_index: f_step must be > 0");
    DopplerTable t;
    t.v_avg = mean_velocity(traj);
    t.phase_centre = aperture_phase_centre(traj, geom);
    t.bins.resize(grid.size());
    const double scale = params.f0 / kSpeedOfLight / f_step;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const Vec2 rel = grid.position(p) - t.phase_centre;
        const double d = norm(rel);
        if (d < 1e-9) {
            t.bins[p] = 0.0f;
            t.flagged.push_back(p);
            continue;
        }
        const double vr = 2.0 * dot(rel, t.v_avg) / d;
        t.bins[p] = static_cast<float>(vr * scale);
    }
    return t;
}

struct DopplerDeviation {
    double max_total_hz = 0;     ///< exact per-contribution Doppler vs the table entry
    double max_velocity_hz = 0;  ///< part caused by v(m) != v_avg at the exact geometry
};

/// How far the exact per-chirp Doppler of one pixel strays from the precomputed value.
inline DopplerDeviation doppler_deviation(const ImageGrid& grid, std::size_t pixel, const DopplerTable& table,
                                          const Trajectory& traj, const ArrayGeometry& geom,
                                          const RadarParams& params, double f_step) {
    const Vec2 p = grid.position(pixel);
    const double table_hz = static_cast<double>(table.bins.at(pixel)) * f_step;
    const double k = params.f0 / kSpeedOfLight;
    DopplerDeviation out;
    for (std::size_t m = 0; m < traj.size(); ++m) {
        for (std::size_t n = 0; n < geom.rx_offsets.size(); ++n) {
            const auto q = antenna_positions(traj, geom, m, n);
            const Vec2 ut = (p - q.tx) * (1.0 / distance(p, q.tx));
            const Vec2 ur = (p - q.rx) * (1.0 / distance(p, q.rx));
            const double exact = k * (dot(ut, traj.velocities[m]) + dot(ur, traj.velocities[m]));
            const double at_avg = k * (dot(ut, table.v_avg) + dot(ur, table.v_avg));
            out.max_total_hz = std::max(out.max_total_hz, std::abs(exact - table_hz));
            out.max_velocity_hz = std::max(out.max_velocity_hz, std::abs(exact - at_avg));
        }
    }
    return out;
}

/// Linear interpolation of complex samples at a fractional index. Indices outside
/// [0, N-1] contribute nothing.
inline std::complex<double> interp_linear(std::span<const std::complex<float>> row, double index) {
    if (row.empty()) throw std::invalid_argument("interp_linear: empty row");
    const double last = static_cast<double>(row.size() - 1);
    if (!(index >= 0.0) || index > last) return {};
    const auto i0 = static_cast<std::size_t>(index);
    const double frac = index - static_cast<double>(i0);
    const std::complex<double> a(row[i0]);
    if (frac == 0.0) return a;
    const std::complex<double> b(row[i0 + 1]);
    return a + frac * (b - a);
}

/// Optimisation measures that can be toggled independently.
struct OptimizationConfig {
    bool window_vector = false;       ///< per-chirp window vector instead of matrix
    bool math_opt = false;            ///< index-space constants a1, a2
    bool doppler_precompute = false;  ///< per-pixel Doppler table
    bool polar_grid = false;          ///< PSF-driven polar grid
    std::optional<std::vector<std::size_t>> rx_subset;

    friend bool operator==(const OptimizationConfig&, const OptimizationConfig&) = default;
};

inline void validate_rx_subset(std::span<const std::size_t> subset, std::size_t num_rx) {
    if (subset.empty()) throw std::invalid_argument("rx subset must not be empty");
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] >= num_rx) {
            throw std::invalid_argument("rx subset index " + std::to_string(subset[i]) + " out of range (num_rx = " +
                                        std::to_string(num_rx) + ")");
        }
        if (i > 0 && subset[i] <= subset[i - 1]) throw std::invalid_argument("rx subset must be strictly increasing");
    }
}

inline BeatSpectrum select_rx_subset(const BeatSpectrum& s, std::span<const std::size_t> subset) {
    validate_rx_subset(subset, s.num_rx);
    BeatSpectrum out{s.num_chirps, subset.size(), s.num_bins, s.f_start, s.f_step, {}};
    out.data.reserve(s.num_chirps * subset.size() * s.num_bins);
    for (std::size_t m = 0; m < s.num_chirps; ++m) {
        for (std::size_t n : subset) {
            const auto row = s.row(m, n);
            out.data.insert(out.data.end(), row.begin(), row.end());
        }
    }
    return out;
}

inline ArrayGeometry select_rx_subset(const ArrayGeometry& g, std::span<const std::size_t> subset) {
    validate_rx_subset(subset, g.rx_offsets.size());
    ArrayGeometry out{g.tx_offset, {}};
    for (std::size_t n : subset) out.rx_offsets.push_back(g.rx_offsets[n]);
    return out;
}

inline RadarParams select_rx_subset(RadarParams p, std::span<const std::size_t> subset) {
    validate_rx_subset(subset, p.num_rx);
    p.num_rx = subset.size();
    return p;
}

enum class DopplerMode {
    PerContribution,  ///< radial speeds from every TX/RX position and v(m)
    Precomputed,      ///< per-pixel table
    Disabled          ///< no Doppler term (ablation only)
};

struct KernelFlags {
    bool window_vector = false;
    bool math_opt = false;
    DopplerMode doppler = DopplerMode::PerContribution;
};

inline KernelFlags kernel_flags(const OptimizationConfig& c) {
    return {c.window_vector, c.math_opt, c.doppler_precompute ? DopplerMode::Precomputed : DopplerMode::PerContribution};
}

/// Operation counters accumulated by the kernels.
struct KernelStats {
    std::uint64_t distance_evals = 0;
    std::uint64_t scalar_products = 0;
    std::uint64_t interpolations = 0;
    std::vector<std::size_t> singular_pixels;
};

/// Kernel working set: everything the pixel loop reads, in single precision.
struct StagedInputs {
    KernelFlags flags;
    std::size_t num_pixels = 0;
    std::size_t num_chirps = 0;
    std::size_t num_rx = 0;
    std::size_t num_bins = 0;  ///< bins kept after cropping to the reachable band
    double f_start = 0;
    double f_step = 1;
    double f0 = 0;
    double mu = 0;
    std::vector<Vec2f> pixels;
    std::vector<Vec2f> tx;          ///< [m]
    std::vector<Vec2f> rx;          ///< [m][n]
    std::vector<Vec2f> velocities;  ///< [m], only for per-contribution Doppler
    WindowValues window;
    std::vector<float> doppler;     ///< [p], only for the precomputed table
    std::vector<std::complex<float>> spectrum;

    std::uint64_t bytes() const {
        auto b = [](const auto& v) {
            return static_cast<std::uint64_t>(v.size()) * sizeof(typename std::decay_t<decltype(v)>::value_type);
        };
        return b(pixels) + b(tx) + b(rx) + b(velocities) + window.bytes() + b(doppler) + b(spectrum);
    }
};

/// Number of leading bins any pixel of `grid` can reach: the largest round-trip distance
/// bounded by the triangle inequality, plus the largest possible Doppler (2|v|max).
inline std::size_t reachable_bins(const ImageGrid& grid, const Trajectory& traj, const ArrayGeometry& geom,
                                  const RadarParams& params, double f_start, double f_step, std::size_t num_bins) {
    const Vec2 c = aperture_centre(traj);
    double pix = 0;
    for (std::size_t p = 0; p < grid.size(); ++p) pix = std::max(pix, distance(grid.position(p), c));
    double ant = 0;
    double vmax = 0;
    for (std::size_t m = 0; m < traj.size(); ++m) {
        vmax = std::max(vmax, norm(traj.velocities[m]));
        ant = std::max(ant, distance(tx_position(traj, geom, m), c));
        for (std::size_t n = 0; n < geom.rx_offsets.size(); ++n) {
            ant = std::max(ant, distance(antenna_positions(traj, geom, m, n).rx, c));
        }
    }
    const double d_max = 2.0 * (pix + ant);
    const double f_max = chirp_rate(params) * d_max / kSpeedOfLight + params.f0 * 2.0 * vmax / kSpeedOfLight;
    const double idx_max = (f_max - f_start) / f_step;
    if (idx_max < 0) return std::min<std::size_t>(num_bins, 2);
    const auto needed = static_cast<std::size_t>(std::floor(idx_max)) + 3;
    return std::min(num_bins, needed);
}

/// Copies the inputs into the kernel's working representation. `doppler` must be given
/// iff flags.doppler == Precomputed; the window form must match flags.window_vector.
inline StagedInputs stage_inputs(const BeatSpectrum& spectrum, const Trajectory& traj, const ArrayGeometry& geom,
                                 const ImageGrid& grid, const RadarParams& params, const KernelFlags& flags,
                                 WindowValues window, const DopplerTable* doppler) {
    validate(params);
    validate(traj, params);
    validate(geom, params);
    validate(spectrum);
    if (spectrum.num_chirps != params.num_chirps || spectrum.num_rx != params.num_rx) {
        throw DataError("spectrum dimensions (" + std::to_string(spectrum.num_chirps) + " x " +
                        std::to_string(spectrum.num_rx) + ") do not match radar parameters (" +
                        std::to_string(params.num_chirps) + " x " + std::to_string(params.num_rx) + ")");
    }
    const WindowForm expected = flags.window_vector ? WindowForm::PerChirpVector : WindowForm::FullMatrix;
    if (window.form != expected) throw std::invalid_argument("stage_inputs: window form does not match kernel flags");
    if (window.num_chirps != params.num_chirps ||
        (window.form == WindowForm::FullMatrix && window.num_pixels != grid.size())) {
        throw std::invalid_argument("stage_inputs: window dimensions do not match grid/trajectory");
    }
    if ((flags.doppler == DopplerMode::Precomputed) != (doppler != nullptr)) {
        throw std::invalid_argument("stage_inputs: Doppler table presence does not match kernel flags");
    }
    if (doppler && doppler->bins.size() != grid.size()) {
        throw std::invalid_argument("stage_inputs: Doppler table does not match grid");
    }

    StagedInputs s;
    s.flags = flags;
    s.num_pixels = grid.size();
    s.num_chirps = params.num_chirps;
    s.num_rx = params.num_rx;
    s.f_start = spectrum.f_start;
    s.f_step = spectrum.f_step;
    s.f0 = params.f0;
    s.mu = chirp_rate(params);
    s.num_bins = reachable_bins(grid, traj, geom, params, spectrum.f_start, spectrum.f_step, spectrum.num_bins);

    s.pixels.resize(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) s.pixels[p] = Vec2f(grid.position(p));
    s.tx.resize(s.num_chirps);
    s.rx.resize(s.num_chirps * s.num_rx);
    for (std::size_t m = 0; m < s.num_chirps; ++m) {
        s.tx[m] = Vec2f(tx_position(traj, geom, m));
        for (std::size_t n = 0; n < s.num_rx; ++n) s.rx[m * s.num_rx + n] = Vec2f(antenna_positions(traj, geom, m, n).rx);
    }
    if (flags.doppler == DopplerMode::PerContribution) {
        s.velocities.resize(s.num_chirps);
        for (std::size_t m = 0; m < s.num_chirps; ++m) s.velocities[m] = Vec2f(traj.velocities[m]);
    }
    s.window = std::move(window);
    if (doppler) s.doppler = doppler->bins;

    s.spectrum.resize(s.num_chirps * s.num_rx * s.num_bins);
    for (std::size_t m = 0; m < s.num_chirps; ++m) {
        for (std::size_t n = 0; n < s.num_rx; ++n) {
            const auto row = spectrum.row(m, n);
            std::copy(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(s.num_bins),
                      s.spectrum.begin() + static_cast<std::ptrdiff_t>((m * s.num_rx + n) * s.num_bins));
        }
    }
    return s;
}

namespace detail {

template <bool WindowVector, bool MathOpt, DopplerMode Doppler>
SarImage run_kernel(const StagedInputs& in, const ImageGrid& grid, Execution exec, KernelStats* stats) {
    if (grid.size() != in.num_pixels) throw std::invalid_argument("backproject: grid does not match staged inputs");
    constexpr double c = kSpeedOfLight;
    const std::size_t nm = in.num_chirps;
    const std::size_t nrx = in.num_rx;
    const std::size_t nf = in.num_bins;

    // Index-space constants: idx = a1 * d_hyp + idx0 (+ Doppler), phase = a2 * d_hyp.
    const double a1 = in.mu / (c * in.f_step);
    const double idx0 = -in.f_start / in.f_step;
    const double a2 = -2.0 * kPi * in.f0 / c;
    const double doppler_bins_per_mps = in.f0 / (c * in.f_step);

    SarImage image(grid);
    std::atomic<std::uint64_t> n_dist{0};
    std::atomic<std::uint64_t> n_dot{0};
    std::atomic<std::uint64_t> n_interp{0};
    std::vector<std::uint8_t> singular(in.num_pixels, 0);

    parallel_for(in.num_pixels, exec, [&](std::size_t begin, std::size_t end) {
        std::uint64_t local_dist = 0;
        std::uint64_t local_dot = 0;
        std::uint64_t local_interp = 0;
        for (std::size_t p = begin; p < end; ++p) {
            const double px = in.pixels[p].x;
            const double py = in.pixels[p].y;
            double acc_re = 0.0;
            double acc_im = 0.0;
            bool bad = false;
            [[maybe_unused]] double f_doppler = 0.0;
            if constexpr (Doppler == DopplerMode::Precomputed) f_doppler = in.doppler[p];

            for (std::size_t m = 0; m < nm && !bad; ++m) {
                const double tx_x = px - in.tx[m].x;
                const double tx_y = py - in.tx[m].y;
                const double d_tx = std::sqrt(tx_x * tx_x + tx_y * tx_y);
                ++local_dist;
                if (d_tx < 1e-9) {
                    bad = true;
                    break;
                }
                [[maybe_unused]] double v_tx = 0.0;
                [[maybe_unused]] double vx = 0.0;
                [[maybe_unused]] double vy = 0.0;
                if constexpr (Doppler == DopplerMode::PerContribution) {
                    vx = in.velocities[m].x;
                    vy = in.velocities[m].y;
                    v_tx = (tx_x * vx + tx_y * vy) / d_tx;
                    ++local_dot;
                }
                double w;
                if constexpr (WindowVector) {
                    w = in.window.values[m];
                } else {
                    w = in.window.values[p * nm + m];
                }

                const Vec2f* rx = in.rx.data() + m * nrx;
                const std::complex<float>* rows = in.spectrum.data() + m * nrx * nf;
                for (std::size_t n = 0; n < nrx; ++n) {
                    const double rx_x = px - rx[n].x;
                    const double rx_y = py - rx[n].y;
                    const double d_rx = std::sqrt(rx_x * rx_x + rx_y * rx_y);
                    ++local_dist;
                    if (d_rx < 1e-9) {
                        bad = true;
                        break;
                    }
                    double index;
                    double phase;
                    if constexpr (MathOpt) {
                        const double d_hyp = d_tx + d_rx;
                        index = a1 * d_hyp + idx0;
                        if constexpr (Doppler == DopplerMode::PerContribution) {
                            const double v_rx = (rx_x * vx + rx_y * vy) / d_rx;
                            ++local_dot;
                            index += doppler_bins_per_mps * (v_tx + v_rx);
                        } else if constexpr (Doppler == DopplerMode::Precomputed) {
                            index += f_doppler;
                        }
                        phase = a2 * d_hyp;
                    } else {
                        const double tau = (d_tx + d_rx) / c;
                        double f_hyp = in.mu * tau;
                        if constexpr (Doppler == DopplerMode::PerContribution) {
                            const double v_rx = (rx_x * vx + rx_y * vy) / d_rx;
                            ++local_dot;
                            f_hyp += in.f0 * (v_tx + v_rx) / c;
                        }
                        index = (f_hyp - in.f_start) / in.f_step;
                        if constexpr (Doppler == DopplerMode::Precomputed) index += f_doppler;
                        phase = -2.0 * kPi * in.f0 * tau;
                    }
                    const auto s = interp_linear(std::span<const std::complex<float>>(rows + n * nf, nf), index);
                    ++local_interp;
                    const double cr = std::cos(phase);
                    const double ci = std::sin(phase);
                    const double re = cr * s.real() - ci * s.imag();
                    const double im = cr * s.imag() + ci * s.real();
                    acc_re += re * w;
                    acc_im += im * w;
                }
            }
            if (bad) {
                singular[p] = 1;
                image.values[p] = {};
            } else {
                image.values[p] = std::complex<float>(static_cast<float>(acc_re), static_cast<float>(acc_im));
            }
        }
        n_dist += local_dist;
        n_dot += local_dot;
        n_interp += local_interp;
    });

    if (stats) {
        stats->distance_evals += n_dist.load();
        stats->scalar_products += n_dot.load();
        stats->interpolations += n_interp.load();
        for (std::size_t p = 0; p < singular.size(); ++p) {
            if (singular[p]) stats->singular_pixels.push_back(p);
        }
    }
    return image;
}

template <bool WindowVector, bool MathOpt>
SarImage dispatch_doppler(const StagedInputs& in, const ImageGrid& grid, Execution exec, KernelStats* stats) {
    switch (in.flags.doppler) {
        case DopplerMode::PerContribution:
            return run_kernel<WindowVector, MathOpt, DopplerMode::PerContribution>(in, grid, exec, stats);
        case DopplerMode::Precomputed:
            return run_kernel<WindowVector, MathOpt, DopplerMode::Precomputed>(in, grid, exec, stats);
        case DopplerMode::Disabled:
            return run_kernel<WindowVector, MathOpt, DopplerMode::Disabled>(in, grid, exec, stats);
    }
    throw std::logic_error("unknown Doppler mode");
}

}  // namespace detail

/// Runs the kernel variant selected by the staged flags.
inline SarImage backproject(const StagedInputs& in, const ImageGrid& grid, Execution exec = {},
                            KernelStats* stats = nullptr) {
    if (in.flags.window_vector) {
        return in.flags.math_opt ? detail::dispatch_doppler<true, true>(in, grid, exec, stats)
                                 : detail::dispatch_doppler<true, false>(in, grid, exec, stats);
    }
    return in.flags.math_opt ? detail::dispatch_doppler<false, true>(in, grid, exec, stats)
                             : detail::dispatch_doppler<false, false>(in, grid, exec, stats);
}

/// Standard back-projection: per-contribution distances, radial speeds, beat frequency
/// and carrier phase, weighted by a per-pixel window matrix.
inline SarImage backproject_reference(const BeatSpectrum& spectrum, const Trajectory& traj, const ArrayGeometry& geom,
                                      const ImageGrid& grid, const WindowValues& window, const RadarParams& params,
                                      Execution exec = {}, KernelStats* stats = nullptr) {
    if (window.form != WindowForm::FullMatrix) {
        throw std::invalid_argument("backproject_reference requires a FullMatrix window");
    }
    const KernelFlags flags{false, false, DopplerMode::PerContribution};
    return backproject(stage_inputs(spectrum, traj, geom, grid, params, flags, window, nullptr), grid, exec, stats);
}

/// Optimised back-projection: index = a1 * d_hyp + f_doppler(p), phase = a2 * d_hyp,
/// per-chirp window vector.
inline SarImage backproject_optimized(const BeatSpectrum& spectrum, const Trajectory& traj, const ArrayGeometry& geom,
                                      const ImageGrid& grid, const WindowValues& window, const DopplerTable& doppler,
                                      const RadarParams& params, Execution exec = {}, KernelStats* stats = nullptr) {
    if (window.form != WindowForm::PerChirpVector) {
        throw std::invalid_argument("backproject_optimized requires a PerChirpVector window");
    }
    const KernelFlags flags{true, true, DopplerMode::Precomputed};
    return backproject(stage_inputs(spectrum, traj, geom, grid, params, flags, window, &doppler), grid, exec, stats);
}

}  // namespace fmcwsar
