#pragma once

// Reconstruction grids: the Cartesian reference grid and the PSF-driven polar grid
// centred on the synthetic aperture, plus polar -> Cartesian resampling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "parallel.hpp"
#include "radar.hpp"

namespace fmcwsar {

/// Pixel (i, j) sits at origin + (i*dx, j*dy); index = j*nx + i.
struct CartesianSpec {
    Vec2 origin;
    double dx = 1;
    double dy = 1;
    std::size_t nx = 1;
    std::size_t ny = 1;

    friend bool operator==(const CartesianSpec&, const CartesianSpec&) = default;
};

/// Pixel (ir, it) sits at centre + r*(cos t, sin t) with r = r_min + ir*dr and
/// t = theta_min + it*dtheta; index = ir*n_theta + it (range-major).
struct PolarSpec {
    Vec2 centre;
    double r_min = 1;
    double dr = 1;
    std::size_t n_r = 1;
    double theta_min = 0;
    double dtheta = 1;
    std::size_t n_theta = 1;

    double r_max() const { return r_min + static_cast<double>(n_r - 1) * dr; }
    double theta_max() const { return theta_min + static_cast<double>(n_theta - 1) * dtheta; }

    friend bool operator==(const PolarSpec&, const PolarSpec&) = default;
};

class ImageGrid {
public:
    explicit ImageGrid(CartesianSpec c) : spec_(c) { check(); }
    explicit ImageGrid(PolarSpec p) : spec_(p) { check(); }

    bool is_cartesian() const { return std::holds_alternative<CartesianSpec>(spec_); }
    bool is_polar() const { return std::holds_alternative<PolarSpec>(spec_); }
    const CartesianSpec& cartesian() const { return std::get<CartesianSpec>(spec_); }
    const PolarSpec& polar() const { return std::get<PolarSpec>(spec_); }

    std::size_t size() const {
        if (is_cartesian()) return cartesian().nx * cartesian().ny;
        return polar().n_r * polar().n_theta;
    }

    Vec2 position(std::size_t index) const {
        if (is_cartesian()) {
            const auto& c = cartesian();
            const std::size_t i = index % c.nx;
            const std::size_t j = index / c.nx;
            return {c.origin.x + static_cast<double>(i) * c.dx, c.origin.y + static_cast<double>(j) * c.dy};
        }
        const auto& p = polar();
        const std::size_t ir = index / p.n_theta;
        const std::size_t it = index % p.n_theta;
        const double r = p.r_min + static_cast<double>(ir) * p.dr;
        const double t = p.theta_min + static_cast<double>(it) * p.dtheta;
        return {p.centre.x + r * std::cos(t), p.centre.y + r * std::sin(t)};
    }

    std::vector<Vec2> pixel_positions() const {
        std::vector<Vec2> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = position(i);
        return out;
    }

    friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

private:
    void check() const {
        if (is_cartesian()) {
            const auto& c = cartesian();
            if (!(c.dx > 0 && c.dy > 0)) throw std::invalid_argument("Cartesian grid: spacings must be > 0");
            if (c.nx < 1 || c.ny < 1) throw std::invalid_argument("Cartesian grid: counts must be >= 1");
        } else {
            const auto& p = polar();
            if (!(p.dr > 0 && p.dtheta > 0)) throw std::invalid_argument("Polar grid: spacings must be > 0");
            if (p.n_r < 1 || p.n_theta < 1) throw std::invalid_argument("Polar grid: counts must be >= 1");
            if (!(p.r_min > 0)) throw std::invalid_argument("Polar grid: r_min must be > 0");
        }
    }

    std::variant<CartesianSpec, PolarSpec> spec_;
};

/// Complex reconstruction on a grid.
struct SarImage {
    ImageGrid grid;
    std::vector<std::complex<float>> values;

    explicit SarImage(ImageGrid g) : grid(std::move(g)), values(grid.size()) {}
    SarImage(ImageGrid g, std::vector<std::complex<float>> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.size()) throw std::invalid_argument("SarImage: value count != grid pixel count");
    }

    std::vector<float> magnitude() const {
        std::vector<float> out(values.size());
        std::transform(values.begin(), values.end(), out.begin(), [](auto v) { return std::abs(v); });
        return out;
    }

    /// Index of the largest magnitude (first one on ties).
    std::size_t argmax() const {
        std::size_t best = 0;
        float best_v = -1;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const float a = std::abs(values[i]);
            if (a > best_v) {
                best_v = a;
                best = i;
            }
        }
        return best;
    }

    float max_magnitude() const { return values.empty() ? 0.0f : std::abs(values[argmax()]); }
};

namespace detail {
inline std::size_t count_steps(double extent, double step) {
    return static_cast<std::size_t>(std::floor(extent / step + 1e-9)) + 1;
}
}  // namespace detail

/// Reference grid: floor(extent/resolution)+1 pixels per axis.
inline ImageGrid cartesian_grid(double extent_x, double extent_y, double resolution, Vec2 origin = {}) {
    if (!(extent_x > 0 && extent_y > 0)) throw std::invalid_argument("cartesian_grid: extents must be > 0");
    if (!(resolution > 0)) throw std::invalid_argument("cartesian_grid: resolution must be > 0");
    return ImageGrid(CartesianSpec{origin, resolution, resolution, detail::count_steps(extent_x, resolution),
                                   detail::count_steps(extent_y, resolution)});
}

struct PsfResolution {
    double delta_r;   ///< c / (2B)
    double delta_az;  ///< lambda * R / (2L)
};

inline PsfResolution psf_resolutions(const RadarParams& params, double aperture_length, double range) {
    if (!(aperture_length > 0)) throw std::invalid_argument("psf_resolutions: aperture_length must be > 0");
    if (!(range > 0)) throw std::invalid_argument("psf_resolutions: range must be > 0");
    const auto wf = derived_waveform(params);
    return {wf.range_resolution, wf.wavelength * range / (2.0 * aperture_length)};
}

struct PolarExtent {
    double r_min;
    double r_max;
    double theta_min;
    double theta_max;
};

/// Smallest range/bearing window around `centre` containing the whole Cartesian grid.
inline PolarExtent polar_cover(const CartesianSpec& c, Vec2 centre) {
    const double x0 = c.origin.x;
    const double y0 = c.origin.y;
    const double x1 = x0 + static_cast<double>(c.nx - 1) * c.dx;
    const double y1 = y0 + static_cast<double>(c.ny - 1) * c.dy;
    const Vec2 nearest{std::clamp(centre.x, x0, x1), std::clamp(centre.y, y0, y1)};
    const double r_min = distance(nearest, centre);
    if (!(r_min > 0)) throw std::invalid_argument("polar_cover: aperture centre lies inside the scene");
    const Vec2 corners[] = {{x0, y0}, {x1, y0}, {x0, y1}, {x1, y1}};
    const Vec2 mid{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    const double ref = std::atan2(mid.y - centre.y, mid.x - centre.x);
    double r_max = 0;
    double lo = 0;
    double hi = 0;
    for (const auto& q : corners) {
        r_max = std::max(r_max, distance(q, centre));
        double a = std::atan2(q.y - centre.y, q.x - centre.x) - ref;
        a = std::remainder(a, 2.0 * kPi);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    return {r_min, r_max, ref + lo, ref + hi};
}

/// PSF-driven polar grid: dr = delta_r / factor, and the arc spacing at r_max equals
/// delta_az(r_max) / factor. The factor must be at least 2 or point targets are under-sampled.
inline ImageGrid polar_grid(const RadarParams& params, double aperture_length, const PolarExtent& extent,
                            double oversample_factor, Vec2 centre) {
    if (!(oversample_factor >= 2.0)) {
        throw std::invalid_argument("polar_grid: oversample factor " + std::to_string(oversample_factor) +
                                    " < 2 cannot depict point targets correctly");
    }
    if (!(extent.r_min > 0)) throw std::invalid_argument("polar_grid: r_min must be > 0");
    if (!(extent.r_max >= extent.r_min)) throw std::invalid_argument("polar_grid: r_max must be >= r_min");
    if (!(extent.theta_max >= extent.theta_min) || extent.theta_max - extent.theta_min > 2.0 * kPi) {
        throw std::invalid_argument("polar_grid: theta span must lie in [0, 2pi]");
    }
    const auto psf = psf_resolutions(params, aperture_length, extent.r_max);
    const double dr = psf.delta_r / oversample_factor;
    const double dtheta = psf.delta_az / (oversample_factor * extent.r_max);
    return ImageGrid(PolarSpec{centre, extent.r_min, dr, detail::count_steps(extent.r_max - extent.r_min, dr),
                               extent.theta_min, dtheta,
                               detail::count_steps(extent.theta_max - extent.theta_min, dtheta)});
}

struct ResampledImage {
    SarImage image;                       ///< bilinearly interpolated complex values
    std::vector<float> magnitude;         ///< bilinearly interpolated magnitudes
    std::vector<std::uint8_t> coverage;   ///< 1 where the polar grid covers the pixel
    std::size_t covered = 0;
};

/// Bilinear interpolation in (r, theta); complex value and magnitude are interpolated
/// independently. Pixels outside the polar coverage are zero with coverage 0.
inline ResampledImage resample_to_cartesian(const SarImage& polar_image, const ImageGrid& target,
                                            Execution exec = {}) {
    if (!polar_image.grid.is_polar()) throw std::invalid_argument("resample_to_cartesian: source must be polar");
    if (!target.is_cartesian()) throw std::invalid_argument("resample_to_cartesian: target must be Cartesian");
    const auto& p = polar_image.grid.polar();
    const auto src_mag = polar_image.magnitude();
    for (const auto& v : polar_image.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("resample_to_cartesian: polar image has non-finite values");
        }
    }

    ResampledImage out{SarImage(target), std::vector<float>(target.size(), 0.0f),
                       std::vector<std::uint8_t>(target.size(), 0), 0};
    constexpr double tol = 1e-9;
    parallel_for(target.size(), exec, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const Vec2 rel = target.position(idx) - p.centre;
            const double fr = (norm(rel) - p.r_min) / p.dr;
            double dth = std::fmod(std::atan2(rel.y, rel.x) - p.theta_min, 2.0 * kPi);
            if (dth < 0) dth += 2.0 * kPi;
            if (dth > 2.0 * kPi - tol * p.dtheta) dth -= 2.0 * kPi;
            const double ft = dth / p.dtheta;
            const double max_r = static_cast<double>(p.n_r - 1);
            const double max_t = static_cast<double>(p.n_theta - 1);
            if (fr < -tol || fr > max_r + tol || ft < -tol || ft > max_t + tol) continue;

            auto split = [](double f, std::size_t n, std::size_t& i0, double& frac) {
                if (n == 1) {
                    i0 = 0;
                    frac = 0;
                    return;
                }
                f = std::clamp(f, 0.0, static_cast<double>(n - 1));
                i0 = std::min(static_cast<std::size_t>(f), n - 2);
                frac = f - static_cast<double>(i0);
            };
            std::size_t ir = 0;
            std::size_t it = 0;
            double ar = 0;
            double at = 0;
            split(fr, p.n_r, ir, ar);
            split(ft, p.n_theta, it, at);
            const std::size_t ir1 = p.n_r == 1 ? ir : ir + 1;
            const std::size_t it1 = p.n_theta == 1 ? it : it + 1;
            const std::size_t i00 = ir * p.n_theta + it;
            const std::size_t i01 = ir * p.n_theta + it1;
            const std::size_t i10 = ir1 * p.n_theta + it;
            const std::size_t i11 = ir1 * p.n_theta + it1;
            const double w00 = (1 - ar) * (1 - at);
            const double w01 = (1 - ar) * at;
            const double w10 = ar * (1 - at);
            const double w11 = ar * at;
            const auto& v = polar_image.values;
            const std::complex<double> c = w00 * std::complex<double>(v[i00]) + w01 * std::complex<double>(v[i01]) +
                                           w10 * std::complex<double>(v[i10]) + w11 * std::complex<double>(v[i11]);
            out.image.values[idx] = std::complex<float>(c);
            out.magnitude[idx] = static_cast<float>(w00 * src_mag[i00] + w01 * src_mag[i01] + w10 * src_mag[i10] +
                                                    w11 * src_mag[i11]);
            out.coverage[idx] = 1;
        }
    });
    out.covered = static_cast<std::size_t>(std::count(out.coverage.begin(), out.coverage.end(), 1));
    return out;
}

}  // namespace fmcwsar
