#pragma once

// Radar constants, platform trajectory and antenna geometry.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vec2.hpp"

namespace fmcwsar {

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// FMCW waveform constants.
struct RadarParams {
    double f0 = 76.6e9;               ///< carrier frequency [Hz]
    double bandwidth = 931e6;         ///< RF bandwidth B [Hz]
    double chirp_duration = 102.4e-6; ///< T_P [s]
    double pri = 106.7e-6;            ///< pulse repetition interval T_P0 [s]
    std::size_t num_chirps = 1024;
    std::size_t num_rx = 16;
    std::size_t num_samples = 1024;   ///< fast-time samples per chirp
    double sample_rate = 10e6;        ///< [Hz]

    friend bool operator==(const RadarParams&, const RadarParams&) = default;
};

/// Throws std::invalid_argument naming the first violated invariant.
inline void validate(const RadarParams& p) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("RadarParams: " + msg); };
    if (!(p.f0 > 0)) fail("f0 must be > 0");
    if (!(p.bandwidth > 0)) fail("bandwidth must be > 0");
    if (!(p.chirp_duration > 0)) fail("chirp_duration must be > 0");
    if (!(p.chirp_duration <= p.pri)) fail("chirp_duration must not exceed pri");
    if (p.num_chirps < 1) fail("num_chirps must be >= 1");
    if (p.num_rx < 1) fail("num_rx must be >= 1");
    if (p.num_samples < 2) fail("num_samples must be >= 2");
    if (!(p.sample_rate > 0)) fail("sample_rate must be > 0");
    const double expected = std::round(p.sample_rate * p.chirp_duration);
    if (static_cast<double>(p.num_samples) != expected) {
        fail("num_samples must equal round(sample_rate * chirp_duration) = " + std::to_string(expected));
    }
}

/// Full-scale radar: 76.6 GHz, 931 MHz, 102.4 us chirps at 106.7 us PRI, 1024 chirps, 16 RX.
inline RadarParams full_scale_params() { return RadarParams{}; }

/// Same waveform with different counts; the sample rate follows num_samples / T_P.
inline RadarParams scaled_params(std::size_t num_chirps, std::size_t num_rx, std::size_t num_samples) {
    RadarParams p;
    p.num_chirps = num_chirps;
    p.num_rx = num_rx;
    p.num_samples = num_samples;
    p.sample_rate = static_cast<double>(num_samples) / p.chirp_duration;
    return p;
}

/// mu = B / T_P.
constexpr double chirp_rate(const RadarParams& p) { return p.bandwidth / p.chirp_duration; }

/// N_m * T_P0: the time budget a real-time implementation must meet.
constexpr double measurement_time(const RadarParams& p) {
    return static_cast<double>(p.num_chirps) * p.pri;
}

struct DerivedWaveform {
    double wavelength;        ///< c / f0 [m]
    double bin_spacing;       ///< f_s / N_s [Hz]
    double range_resolution;  ///< c / (2B) [m]
};

constexpr DerivedWaveform derived_waveform(const RadarParams& p) {
    return {kSpeedOfLight / p.f0, p.sample_rate / static_cast<double>(p.num_samples),
            kSpeedOfLight / (2.0 * p.bandwidth)};
}

/// Per-chirp platform state. Positions are the platform reference point at chirp start.
struct Trajectory {
    std::vector<Vec2> poses;
    std::vector<Vec2> velocities;
    std::vector<Vec2> headings;

    std::size_t size() const { return poses.size(); }
};

inline void validate(const Trajectory& t, const RadarParams& p) {
    if (t.poses.size() != p.num_chirps || t.velocities.size() != p.num_chirps ||
        t.headings.size() != p.num_chirps) {
        throw std::invalid_argument("Trajectory: sequence lengths must equal num_chirps (" +
                                    std::to_string(p.num_chirps) + ")");
    }
    for (std::size_t m = 0; m < t.headings.size(); ++m) {
        if (std::abs(norm(t.headings[m]) - 1.0) > 1e-9) {
            throw std::invalid_argument("Trajectory: heading " + std::to_string(m) + " is not a unit vector");
        }
    }
}

/// Single TX plus N_rx receivers, offsets in the platform frame (x forward, y left).
struct ArrayGeometry {
    Vec2 tx_offset;
    std::vector<Vec2> rx_offsets;
};

inline void validate(const ArrayGeometry& g, const RadarParams& p) {
    if (g.rx_offsets.size() != p.num_rx) {
        throw std::invalid_argument("ArrayGeometry: rx_offsets length must equal num_rx (" +
                                    std::to_string(p.num_rx) + ")");
    }
}

/// Uniform linear RX array along the driving direction, centred on the TX.
inline ArrayGeometry uniform_linear_array(std::size_t num_rx, double spacing, Vec2 tx_offset = {}) {
    ArrayGeometry g{tx_offset, {}};
    g.rx_offsets.reserve(num_rx);
    const double centre = 0.5 * static_cast<double>(num_rx - 1);
    for (std::size_t n = 0; n < num_rx; ++n) {
        g.rx_offsets.push_back(tx_offset + Vec2{(static_cast<double>(n) - centre) * spacing, 0.0});
    }
    return g;
}

struct AntennaPositions {
    Vec2 tx;
    Vec2 rx;
};

/// World positions of the TX and RX `n_rx` at chirp `m`.
inline AntennaPositions antenna_positions(const Trajectory& traj, const ArrayGeometry& geom, std::size_t m,
                                          std::size_t n_rx) {
    if (m >= traj.size()) {
        throw std::out_of_range("antenna_positions: chirp index " + std::to_string(m) + " >= " +
                                std::to_string(traj.size()));
    }
    if (n_rx >= geom.rx_offsets.size()) {
        throw std::out_of_range("antenna_positions: rx index " + std::to_string(n_rx) + " >= " +
                                std::to_string(geom.rx_offsets.size()));
    }
    const Vec2& pose = traj.poses[m];
    const Vec2& h = traj.headings[m];
    return {pose + rotate_by_heading(geom.tx_offset, h), pose + rotate_by_heading(geom.rx_offsets[n_rx], h)};
}

inline Vec2 tx_position(const Trajectory& traj, const ArrayGeometry& geom, std::size_t m) {
    return antenna_positions(traj, geom, m, 0).tx;
}

// ---------------------------------------------------------------------------
// Trajectory builders. All passes are centred so that the mean pose lies at
// `centre` (exactly for straight passes, up to the arc sagitta for arcs).

inline Vec2 unit(Vec2 v) {
    const double n = norm(v);
    if (!(n > 0)) throw std::invalid_argument("zero-length direction vector");
    return v * (1.0 / n);
}

/// Constant-velocity straight pass.
inline Trajectory straight_pass(const RadarParams& p, double speed, Vec2 centre = {}, Vec2 heading = {1, 0}) {
    heading = unit(heading);
    Trajectory t;
    const std::size_t n = p.num_chirps;
    const double mid = 0.5 * static_cast<double>(n - 1);
    for (std::size_t m = 0; m < n; ++m) {
        const double s = (static_cast<double>(m) - mid) * p.pri * speed;
        t.poses.push_back(centre + heading * s);
        t.velocities.push_back(heading * speed);
        t.headings.push_back(heading);
    }
    return t;
}

/// Straight pass whose speed ramps linearly from v0 (first chirp) to v1 (last chirp).
inline Trajectory accelerating_pass(const RadarParams& p, double v0, double v1, Vec2 centre = {},
                                    Vec2 heading = {1, 0}) {
    heading = unit(heading);
    const std::size_t n = p.num_chirps;
    const double total = static_cast<double>(n - 1) * p.pri;
    const double accel = total > 0 ? (v1 - v0) / total : 0.0;
    std::vector<double> s(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double t = static_cast<double>(m) * p.pri;
        s[m] = v0 * t + 0.5 * accel * t * t;
    }
    const double shift = 0.5 * (s.front() + s.back());
    Trajectory t;
    for (std::size_t m = 0; m < n; ++m) {
        const double time = static_cast<double>(m) * p.pri;
        t.poses.push_back(centre + heading * (s[m] - shift));
        t.velocities.push_back(heading * (v0 + accel * time));
        t.headings.push_back(heading);
    }
    return t;
}

/// Constant-speed arc turning left (counter-clockwise) with the given radius.
inline Trajectory arc_pass(const RadarParams& p, double radius, double speed, Vec2 centre = {},
                           Vec2 heading = {1, 0}) {
    if (!(radius > 0)) throw std::invalid_argument("arc_pass: radius must be > 0");
    heading = unit(heading);
    const Vec2 left{-heading.y, heading.x};
    const Vec2 pivot = centre + left * radius;
    const double phi0 = std::atan2(-left.y, -left.x);
    const std::size_t n = p.num_chirps;
    const double mid = 0.5 * static_cast<double>(n - 1);
    Trajectory t;
    for (std::size_t m = 0; m < n; ++m) {
        const double phi = phi0 + (static_cast<double>(m) - mid) * p.pri * speed / radius;
        const Vec2 radial{std::cos(phi), std::sin(phi)};
        const Vec2 tangent{-radial.y, radial.x};
        t.poses.push_back(pivot + radial * radius);
        t.velocities.push_back(tangent * speed);
        t.headings.push_back(tangent);
    }
    return t;
}

/// Mean of the per-chirp poses.
inline Vec2 aperture_centre(const Trajectory& t) {
    Vec2 acc;
    for (const auto& q : t.poses) acc += q;
    return acc * (1.0 / static_cast<double>(t.poses.size()));
}

/// Straight-line distance between the first and last pose.
inline double aperture_length(const Trajectory& t) { return distance(t.poses.front(), t.poses.back()); }

inline Vec2 mean_velocity(const Trajectory& t) {
    Vec2 acc;
    for (const auto& v : t.velocities) acc += v;
    return acc * (1.0 / static_cast<double>(t.velocities.size()));
}

}  // namespace fmcwsar
