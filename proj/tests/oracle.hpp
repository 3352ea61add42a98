#pragma once

// Brute-force back-projection of a single pixel in long double, written directly from
// the per-contribution formulas. Positions are rounded to float first, the same working
// precision the kernels use, so the comparison isolates the arithmetic.

#include <fmcwsar/backprojection.hpp>

#include <cmath>
#include <complex>

namespace oracle {

using ld = long double;
using cld = std::complex<ld>;

enum class Doppler { Exact, Fixed, None };

inline ld rf(double v) { return static_cast<ld>(static_cast<float>(v)); }

inline cld sample(const fmcwsar::BeatSpectrum& s, std::size_t m, std::size_t n, ld idx) {
    if (idx < 0 || idx > static_cast<ld>(s.num_bins - 1)) return 0;
    const auto i = static_cast<std::size_t>(std::floor(idx));
    const ld a = idx - static_cast<ld>(i);
    const auto row = s.row(m, n);
    const cld lo(row[i].real(), row[i].imag());
    if (i + 1 >= s.num_bins) return lo;
    const cld hi(row[i + 1].real(), row[i + 1].imag());
    return (1 - a) * lo + a * hi;
}

/// weights[m] per chirp; fixed_bins is the Doppler shift (in bins) for Doppler::Fixed.
inline cld pixel(const fmcwsar::BeatSpectrum& s, const fmcwsar::Trajectory& traj, const fmcwsar::ArrayGeometry& geom,
                 const fmcwsar::RadarParams& p, const std::vector<double>& weights, fmcwsar::Vec2 pix, Doppler mode,
                 ld fixed_bins = 0) {
    const ld c = 299792458.0L;
    const ld pi = 3.14159265358979323846264338L;
    const ld mu = static_cast<ld>(p.bandwidth) / static_cast<ld>(p.chirp_duration);
    const ld f0 = p.f0;
    const ld px = rf(pix.x);
    const ld py = rf(pix.y);
    cld acc = 0;
    for (std::size_t m = 0; m < traj.size(); ++m) {
        const ld vx = rf(traj.velocities[m].x);
        const ld vy = rf(traj.velocities[m].y);
        for (std::size_t n = 0; n < geom.rx_offsets.size(); ++n) {
            const auto q = fmcwsar::antenna_positions(traj, geom, m, n);
            const ld tx = px - rf(q.tx.x);
            const ld ty = py - rf(q.tx.y);
            const ld rx = px - rf(q.rx.x);
            const ld ry = py - rf(q.rx.y);
            const ld dtx = std::sqrt(tx * tx + ty * ty);
            const ld drx = std::sqrt(rx * rx + ry * ry);
            const ld tau = (dtx + drx) / c;
            ld f = mu * tau;
            if (mode == Doppler::Exact) f += f0 * ((tx * vx + ty * vy) / dtx + (rx * vx + ry * vy) / drx) / c;
            ld idx = (f - s.f_start) / s.f_step;
            if (mode == Doppler::Fixed) idx += fixed_bins;
            const cld rot = std::polar<ld>(1.0L, -2 * pi * f0 * tau);
            acc += static_cast<ld>(static_cast<float>(weights[m])) * rot * sample(s, m, n, idx);
        }
    }
    return acc;
}

}  // namespace oracle
