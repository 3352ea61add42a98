#pragma once

// Image-quality and cost metrics: region SNR, dB difference maps, memory footprint of
// the kernel inputs, and repeated timing runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "backprojection.hpp"
#include "grid.hpp"
#include "io.hpp"

namespace fmcwsar {

struct Rect {
    double x0, y0, x1, y1;

    bool contains(const Vec2& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct RegionSpec {
    std::string name;
    Rect rect;

    friend bool operator==(const RegionSpec&, const RegionSpec&) = default;
};

inline std::vector<std::size_t> region_pixels(const ImageGrid& grid, const RegionSpec& region) {
    if (!(region.rect.x1 > region.rect.x0 && region.rect.y1 > region.rect.y0)) {
        throw std::invalid_argument("region '" + region.name + "' is degenerate");
    }
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        if (region.rect.contains(grid.position(p))) out.push_back(p);
    }
    if (out.empty()) throw std::invalid_argument("region '" + region.name + "' contains no pixels of the grid");
    return out;
}

inline double mean_power(const SarImage& img, std::span<const std::size_t> pixels) {
    double acc = 0;
    for (std::size_t p : pixels) acc += std::norm(std::complex<double>(img.values[p]));
    return acc / static_cast<double>(pixels.size());
}

/// 10*log10(mean |P|^2 over each signal region / mean |P|^2 over the noise region).
inline std::vector<double> region_snr(const SarImage& img, std::span<const RegionSpec> signal_regions,
                                      const RegionSpec& noise_region) {
    const auto noise_px = region_pixels(img.grid, noise_region);
    const double noise = mean_power(img, noise_px);
    std::vector<double> out;
    for (const auto& r : signal_regions) {
        const auto px = region_pixels(img.grid, r);
        out.push_back(10.0 * std::log10(mean_power(img, px) / noise));
    }
    return out;
}

struct DiffResult {
    std::vector<float> db;  ///< per pixel; 0 where masked out
    double median = 0;
    double p05 = 0;
    double p95 = 0;
    std::size_t counted = 0;
};

/// Linear-interpolated percentile of unsorted data, q in [0, 1].
inline double percentile(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("percentile of empty set");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

/// 20*log10(|a|/|b|) per pixel. Both magnitudes are floored at floor_rel * max|b|.
/// Summary statistics only use pixels where `mask` (if given) is non-zero.
inline DiffResult image_diff_db(std::span<const float> mag_a, std::span<const float> mag_b,
                                std::span<const std::uint8_t> mask = {}, double floor_rel = 1e-12) {
    if (mag_a.size() != mag_b.size()) throw std::invalid_argument("image_diff_db: images have different pixel counts");
    if (!mask.empty() && mask.size() != mag_a.size()) throw std::invalid_argument("image_diff_db: mask size mismatch");
    const float peak = mag_b.empty() ? 0.0f : *std::max_element(mag_b.begin(), mag_b.end());
    const double eps = std::max(static_cast<double>(peak) * floor_rel, std::numeric_limits<double>::min());
    DiffResult r;
    r.db.assign(mag_a.size(), 0.0f);
    std::vector<double> used;
    used.reserve(mag_a.size());
    for (std::size_t i = 0; i < mag_a.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        const double a = std::max(static_cast<double>(mag_a[i]), eps);
        const double b = std::max(static_cast<double>(mag_b[i]), eps);
        const double d = 20.0 * std::log10(a / b);
        r.db[i] = static_cast<float>(d);
        used.push_back(d);
    }
    r.counted = used.size();
    if (!used.empty()) {
        r.median = percentile(used, 0.5);
        r.p05 = percentile(used, 0.05);
        r.p95 = percentile(used, 0.95);
    }
    return r;
}

inline DiffResult image_diff_db(const SarImage& a, const SarImage& b, double floor_rel = 1e-12) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("image_diff_db: images are on different grids");
    const auto ma = a.magnitude();
    const auto mb = b.magnitude();
    return image_diff_db(ma, mb, {}, floor_rel);
}

/// max_p ||a_p| - |b_p|| / max_p |b_p|.
inline double max_relative_deviation(const SarImage& a, const SarImage& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("max_relative_deviation: different grids");
    const double peak = b.max_magnitude();
    double worst = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        worst = std::max(worst, std::abs(static_cast<double>(std::abs(a.values[i])) - std::abs(b.values[i])));
    }
    return peak > 0 ? worst / peak : worst;
}

struct FootprintItem {
    std::string name;
    std::uint64_t bytes;
};

struct MemoryFootprint {
    std::vector<FootprintItem> items;
    std::uint64_t total = 0;

    std::uint64_t get(const std::string& name) const {
        for (const auto& i : items) {
            if (i.name == name) return i.bytes;
        }
        throw std::out_of_range("no footprint item '" + name + "'");
    }
};

/// Bytes staged for the kernel: complex float32 = 8 B, float32 = 4 B, 2-D float32 point = 8 B.
/// `num_bins` is the number of spectrum bins kept (see reachable_bins); 0 means all N_s.
inline MemoryFootprint memory_footprint(const RadarParams& params, std::uint64_t num_pixels,
                                        const OptimizationConfig& config, std::uint64_t num_bins = 0) {
    const std::uint64_t nm = params.num_chirps;
    const std::uint64_t nrx = config.rx_subset ? config.rx_subset->size() : params.num_rx;
    const std::uint64_t nf = num_bins ? num_bins : params.num_samples;
    MemoryFootprint f;
    f.items = {
        {"spectrum", nm * nrx * nf * 8},
        {"window", (config.window_vector ? nm : num_pixels * nm) * 4},
        {"doppler_table", config.doppler_precompute ? num_pixels * 4 : 0},
        {"pixel_positions", num_pixels * 8},
        {"antenna_positions", nm * (1 + nrx) * 8},
        {"velocities", config.doppler_precompute ? 0 : nm * 8},
    };
    for (const auto& i : f.items) f.total += i.bytes;
    return f;
}

// ---------------------------------------------------------------------------

struct PhaseStats {
    double mean = 0;
    double min = 0;
    double max = 0;
};

struct BenchSample {
    double load_s;
    double bp_s;
    double total_s;
};

struct BenchReport {
    std::string label;
    std::size_t repetitions = 0;
    std::vector<BenchSample> samples;  ///< every repetition, warm-up included
    bool warmup_excluded = false;
    PhaseStats load;
    PhaseStats bp;
    PhaseStats total;
    std::uint64_t bytes_prepared = 0;
    std::uint64_t output_hash = 0;
};

inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline PhaseStats phase_stats(std::span<const double> v) {
    PhaseStats s{0, v.front(), v.front()};
    for (double x : v) {
        s.mean += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean /= static_cast<double>(v.size());
    return s;
}

/// Times `load()` (staging, returns an object with bytes()) and `compute(staged)`
/// (returns a SarImage) `repetitions` times. The first run is treated as warm-up and
/// dropped from the statistics when more than three repetitions are requested. Every
/// repetition must produce the same image bytes.
template <typename Load, typename Compute>
BenchReport run_benchmark(std::string label, std::size_t repetitions, Load&& load, Compute&& compute) {
    if (repetitions < 1) throw std::invalid_argument("run_benchmark: repetitions must be >= 1");
    using clock = std::chrono::steady_clock;
    BenchReport r;
    r.label = std::move(label);
    r.repetitions = repetitions;
    r.warmup_excluded = repetitions > 3;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const auto t0 = clock::now();
        auto staged = load();
        const auto t1 = clock::now();
        const SarImage img = compute(staged);
        const auto t2 = clock::now();
        const std::uint64_t h = fnv1a(io::encode_image(img));
        if (rep == 0) {
            r.output_hash = h;
            r.bytes_prepared = staged.bytes();
        } else if (h != r.output_hash) {
            throw std::runtime_error("run_benchmark: output of '" + r.label + "' differs between repetitions");
        }
        r.samples.push_back({std::chrono::duration<double>(t1 - t0).count(),
                             std::chrono::duration<double>(t2 - t1).count(),
                             std::chrono::duration<double>(t2 - t0).count()});
    }
    std::vector<double> load_v;
    std::vector<double> bp_v;
    std::vector<double> total_v;
    for (std::size_t i = r.warmup_excluded ? 1 : 0; i < r.samples.size(); ++i) {
        load_v.push_back(r.samples[i].load_s);
        bp_v.push_back(r.samples[i].bp_s);
        total_v.push_back(r.samples[i].total_s);
    }
    r.load = phase_stats(load_v);
    r.bp = phase_stats(bp_v);
    r.total = phase_stats(total_v);
    return r;
}

inline void write_bench_csv_header(std::ostream& os) { os << "label,rep,load_s,bp_s,total_s,bytes_prepared\n"; }

inline void write_bench_csv_rows(std::ostream& os, const BenchReport& r) {
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const auto& s = r.samples[i];
        os << r.label << ',' << i << ',' << s.load_s << ',' << s.bp_s << ',' << s.total_s << ',' << r.bytes_prepared
           << '\n';
    }
}

}  // namespace fmcwsar
