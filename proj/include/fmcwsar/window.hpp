#pragma once

// Taper functions for fast time (range) and slow time (aperture).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "radar.hpp"

namespace fmcwsar {

enum class WindowFamily { Rectangular, Hann, Kaiser };

/// A taper family plus its shape parameter (only used by Kaiser).
struct Taper {
    WindowFamily family = WindowFamily::Hann;
    double beta = 4.0;

    friend bool operator==(const Taper&, const Taper&) = default;
};

inline void validate(const Taper& t) {
    if (t.family == WindowFamily::Kaiser && !(t.beta >= 0)) {
        throw std::invalid_argument("Kaiser window requires beta >= 0");
    }
}

inline std::string to_string(WindowFamily f) {
    switch (f) {
        case WindowFamily::Rectangular: return "rect";
        case WindowFamily::Hann: return "hann";
        case WindowFamily::Kaiser: return "kaiser";
    }
    return "?";
}

inline WindowFamily window_family_from_string(const std::string& s) {
    if (s == "rect" || s == "rectangular") return WindowFamily::Rectangular;
    if (s == "hann") return WindowFamily::Hann;
    if (s == "kaiser") return WindowFamily::Kaiser;
    throw std::invalid_argument("unknown window family '" + s + "'");
}

/// Evaluate the taper at a normalised abscissa u in [0, 1].
inline double evaluate(const Taper& t, double u) {
    switch (t.family) {
        case WindowFamily::Rectangular: return 1.0;
        case WindowFamily::Hann: return 0.5 - 0.5 * std::cos(2.0 * kPi * u);
        case WindowFamily::Kaiser: {
            const double x = 2.0 * u - 1.0;
            const double arg = t.beta * std::sqrt(std::max(0.0, 1.0 - x * x));
            return std::cyl_bessel_i(0.0, arg) / std::cyl_bessel_i(0.0, t.beta);
        }
    }
    return 1.0;
}

/// n equidistant samples u_k = k/(n-1); a single sample is 1.
inline std::vector<double> sample_taper(const Taper& t, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = evaluate(t, static_cast<double>(k) / static_cast<double>(n - 1));
    }
    return w;
}

/// Full -3 dB width of the taper's spectral main lobe, in DFT bins of an n-point transform.
/// Rectangular gives ~0.886, Hann ~1.44.
inline double half_power_width_bins(const Taper& t, std::size_t n = 256) {
    const auto w = sample_taper(t, n);
    auto response = [&](double bins) {
        std::complex<double> acc;
        for (std::size_t k = 0; k < n; ++k) {
            acc += w[k] * std::polar(1.0, -2.0 * kPi * bins * static_cast<double>(k) / static_cast<double>(n));
        }
        return std::abs(acc);
    };
    const double peak = response(0.0);
    const double target = peak / std::sqrt(2.0);
    double lo = 0.0;
    double hi = 4.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (response(mid) > target ? lo : hi) = mid;
    }
    return 2.0 * 0.5 * (lo + hi);
}

}  // namespace fmcwsar
