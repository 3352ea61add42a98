#pragma once

// Synthetic FMCW echoes from point scatterers, range compression and noise.
//
// The echo model is stop-and-go within a chirp plus a linear Doppler ramp, the same
// model the back-projection kernels invert: for scatterer k seen by TX/RX pair n at
// chirp m the beat signal is
//     a_k * exp(j2pi((mu*tau_k + f0*v_k/c) * t + f0*tau_k)),
// with tau_k the round-trip delay at chirp start and v_k the summed TX and RX closing
// speeds. No range attenuation is applied.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "radar.hpp"
#include "window.hpp"

namespace fmcwsar {

using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

struct PointScatterer {
    Vec2 position;
    cdouble amplitude{1.0, 0.0};
};

/// Fast-time samples, layout [chirp][rx][sample].
struct TimeSamples {
    std::size_t num_chirps = 0;
    std::size_t num_rx = 0;
    std::size_t num_samples = 0;
    double sample_rate = 0;
    std::vector<cfloat> data;

    std::span<const cfloat> row(std::size_t m, std::size_t n) const {
        return {data.data() + (m * num_rx + n) * num_samples, num_samples};
    }
};

/// Range-compressed data cube, layout [chirp][rx][bin], on an equidistant beat-frequency axis.
struct BeatSpectrum {
    std::size_t num_chirps = 0;
    std::size_t num_rx = 0;
    std::size_t num_bins = 0;
    double f_start = 0;  ///< beat frequency of bin 0 [Hz]
    double f_step = 1;   ///< bin spacing [Hz]
    std::vector<cfloat> data;

    std::size_t offset(std::size_t m, std::size_t n) const { return (m * num_rx + n) * num_bins; }
    std::span<const cfloat> row(std::size_t m, std::size_t n) const {
        return {data.data() + offset(m, n), num_bins};
    }
    std::span<cfloat> row(std::size_t m, std::size_t n) { return {data.data() + offset(m, n), num_bins}; }
    double frequency(std::size_t k) const { return f_start + static_cast<double>(k) * f_step; }
    std::uint64_t data_bytes() const { return static_cast<std::uint64_t>(data.size()) * sizeof(cfloat); }

    friend bool operator==(const BeatSpectrum&, const BeatSpectrum&) = default;
};

inline void validate(const BeatSpectrum& s) {
    if (s.num_chirps == 0 || s.num_rx == 0 || s.num_bins == 0) {
        throw std::invalid_argument("BeatSpectrum: all dimensions must be >= 1");
    }
    if (s.data.size() != s.num_chirps * s.num_rx * s.num_bins) {
        throw std::invalid_argument("BeatSpectrum: data length does not match dimensions");
    }
    if (!(s.f_step > 0)) throw std::invalid_argument("BeatSpectrum: f_step must be > 0");
}

namespace detail {

struct EchoTerm {
    double beat_hz;     // mu*tau + f0*v/c
    double carrier_cyc; // f0*tau, reduced modulo 1
};

inline EchoTerm echo_term(const RadarParams& p, const Vec2& target, const Vec2& q_tx, const Vec2& q_rx,
                          const Vec2& velocity) {
    const Vec2 to_tx = target - q_tx;
    const Vec2 to_rx = target - q_rx;
    const double d_tx = norm(to_tx);
    const double d_rx = norm(to_rx);
    if (d_tx < 1e-9 || d_rx < 1e-9) {
        throw std::invalid_argument("simulate_beat_time: scatterer coincides with an antenna position");
    }
    const double v = dot(to_tx, velocity) / d_tx + dot(to_rx, velocity) / d_rx;
    const double tau = (d_tx + d_rx) / kSpeedOfLight;
    const double carrier = p.f0 * tau;
    return {chirp_rate(p) * tau + p.f0 * v / kSpeedOfLight, carrier - std::floor(carrier)};
}

}  // namespace detail

/// Synthesises the dechirped fast-time signal of every chirp and RX channel.
inline TimeSamples simulate_beat_time(const RadarParams& params, const Trajectory& traj,
                                      const ArrayGeometry& geom, std::span<const PointScatterer> scene,
                                      Execution exec = {}) {
    validate(params);
    validate(traj, params);
    validate(geom, params);
    if (scene.empty()) throw std::invalid_argument("simulate_beat_time: scene must contain at least one scatterer");
    for (const auto& s : scene) {
        if (!(std::abs(s.amplitude) > 0)) throw std::invalid_argument("PointScatterer: |amplitude| must be > 0");
    }

    TimeSamples out{params.num_chirps, params.num_rx, params.num_samples, params.sample_rate, {}};
    out.data.assign(params.num_chirps * params.num_rx * params.num_samples, cfloat{});
    const double dt = 1.0 / params.sample_rate;

    parallel_for(params.num_chirps, exec, [&](std::size_t begin, std::size_t end) {
        std::vector<cdouble> acc(params.num_samples);
        for (std::size_t m = begin; m < end; ++m) {
            for (std::size_t n = 0; n < params.num_rx; ++n) {
                const auto q = antenna_positions(traj, geom, m, n);
                std::fill(acc.begin(), acc.end(), cdouble{});
                for (const auto& s : scene) {
                    const auto e = detail::echo_term(params, s.position, q.tx, q.rx, traj.velocities[m]);
                    for (std::size_t i = 0; i < params.num_samples; ++i) {
                        const double cycles = e.beat_hz * static_cast<double>(i) * dt + e.carrier_cyc;
                        acc[i] += s.amplitude * std::polar(1.0, 2.0 * kPi * cycles);
                    }
                }
                cfloat* dst = out.data.data() + (m * params.num_rx + n) * params.num_samples;
                for (std::size_t i = 0; i < params.num_samples; ++i) dst[i] = cfloat(acc[i]);
            }
        }
    });
    return out;
}

/// Windowed forward DFT of every (chirp, rx) row, zero-padded to zero_pad * N_s bins.
/// Rows are scaled by 1/sum(window), so a unit-amplitude tone on a bin peaks at 1.
inline BeatSpectrum range_compress(const TimeSamples& samples, const Taper& fast_time_window = {WindowFamily::Rectangular},
                                   std::size_t zero_pad = 1, Execution exec = {}) {
    validate(fast_time_window);
    if (zero_pad < 1) throw std::invalid_argument("range_compress: zero_pad must be >= 1");
    if (samples.num_samples < 2) throw std::invalid_argument("range_compress: need at least 2 samples per chirp");
    if (samples.data.size() != samples.num_chirps * samples.num_rx * samples.num_samples) {
        throw std::invalid_argument("range_compress: sample buffer does not match its dimensions");
    }
    const std::size_t ns = samples.num_samples;
    const std::size_t nf = ns * zero_pad;
    const auto w = sample_taper(fast_time_window, ns);
    double wsum = 0;
    for (double v : w) wsum += v;
    const double scale = 1.0 / wsum;

    BeatSpectrum out{samples.num_chirps, samples.num_rx, nf, 0.0,
                     samples.sample_rate / static_cast<double>(nf), {}};
    out.data.assign(samples.num_chirps * samples.num_rx * nf, cfloat{});

    using fftw_buf = std::unique_ptr<fftw_complex, decltype(&fftw_free)>;
    auto alloc = [nf] { return fftw_buf(fftw_alloc_complex(nf), &fftw_free); };
    // Planning is not thread-safe; plan once, execute on per-worker aligned buffers.
    fftw_buf plan_in = alloc();
    fftw_buf plan_out = alloc();
    const int nf_int = static_cast<int>(nf);
    fftw_plan plan = fftw_plan_dft_1d(nf_int, plan_in.get(), plan_out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("range_compress: FFT planning failed");
    std::unique_ptr<fftw_plan_s, decltype(&fftw_destroy_plan)> plan_guard(plan, &fftw_destroy_plan);

    const std::size_t rows = samples.num_chirps * samples.num_rx;
    parallel_for(rows, exec, [&](std::size_t begin, std::size_t end) {
        fftw_buf in = alloc();
        fftw_buf spec = alloc();
        for (std::size_t r = begin; r < end; ++r) {
            const cfloat* src = samples.data.data() + r * ns;
            for (std::size_t i = 0; i < nf; ++i) {
                if (i < ns) {
                    in.get()[i][0] = w[i] * src[i].real();
                    in.get()[i][1] = w[i] * src[i].imag();
                } else {
                    in.get()[i][0] = 0.0;
                    in.get()[i][1] = 0.0;
                }
            }
            fftw_execute_dft(plan, in.get(), spec.get());
            cfloat* dst = out.data.data() + r * nf;
            for (std::size_t k = 0; k < nf; ++k) {
                dst[k] = cfloat(static_cast<float>(spec.get()[k][0] * scale),
                                static_cast<float>(spec.get()[k][1] * scale));
            }
        }
    });
    return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Adds circular complex Gaussian noise (std `sigma` per component). Each (chirp, rx) row
/// draws from its own generator keyed by (seed, m, n), so the result does not depend on
/// execution order.
inline BeatSpectrum add_noise(BeatSpectrum spectrum, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0)) throw std::invalid_argument("add_noise: sigma must be >= 0");
    if (sigma == 0) return spectrum;
    std::normal_distribution<double> gauss(0.0, sigma);
    for (std::size_t m = 0; m < spectrum.num_chirps; ++m) {
        for (std::size_t n = 0; n < spectrum.num_rx; ++n) {
            const std::uint64_t key =
                detail::splitmix64(detail::splitmix64(detail::splitmix64(seed) ^ m) ^ (n + 0x51ED270Bull));
            std::mt19937_64 rng(key);
            gauss.reset();
            for (auto& v : spectrum.row(m, n)) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                v += cfloat(static_cast<float>(re), static_cast<float>(im));
            }
        }
    }
    return spectrum;
}

/// simulate_beat_time followed by range_compress.
inline BeatSpectrum simulate_spectrum(const RadarParams& params, const Trajectory& traj, const ArrayGeometry& geom,
                                      std::span<const PointScatterer> scene,
                                      const Taper& fast_time_window = {WindowFamily::Rectangular},
                                      std::size_t zero_pad = 1, Execution exec = {}) {
    return range_compress(simulate_beat_time(params, traj, geom, scene, exec), fast_time_window, zero_pad, exec);
}

}  // namespace fmcwsar
