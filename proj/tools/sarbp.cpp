// sarbp: simulate, reconstruct, compare and benchmark FMCW SAR back-projection.
//
//   sarbp simulate    --config cfg.json [--out spectrum.sarbp] [--seed N]
//   sarbp reconstruct --config cfg.json --data spectrum.sarbp [--out image.sarim]
//   sarbp compare     a.sarim b.sarim [--config cfg.json] [--out diff.json]
//   sarbp bench       --config cfg.json [--data spectrum.sarbp] [--reps 20] [--out bench.csv]
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 internal error.

#include <CLI11.hpp>

#include <fmcwsar/fmcwsar.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace fmcwsar;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct Options {
    std::string config;
    std::string data;
    std::string out;
    std::vector<std::string> images;
    std::size_t reps = 20;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    double dynamic_range_db = 60.0;
};

std::string with_extension(const std::string& path, const std::string& ext) {
    return std::filesystem::path(path).replace_extension(ext).string();
}

PipelineConfig load(const Options& o) {
    if (o.config.empty()) throw ConfigError("--config is required");
    PipelineConfig c = load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    return c;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f << j.dump(2) << '\n';
}

json measures_json(const OptimizationConfig& m) {
    json j{{"window_vector", m.window_vector},
           {"math_opt", m.math_opt},
           {"doppler_precompute", m.doppler_precompute},
           {"polar_grid", m.polar_grid}};
    j["rx_subset"] = m.rx_subset ? json(*m.rx_subset) : json(nullptr);
    return j;
}

int cmd_simulate(const Options& o) {
    const auto c = load(o);
    const auto spectrum = simulate(c, {o.threads});
    const std::string out = o.out.empty() ? c.outputs.spectrum : o.out;
    io::write_spectrum(out, spectrum);
    std::printf("wrote %s: %zu chirps x %zu rx x %zu bins, %llu bytes\n", out.c_str(), spectrum.num_chirps,
                spectrum.num_rx, spectrum.num_bins,
                static_cast<unsigned long long>(spectrum.data_bytes() + io::kSpectrumHeaderBytes));
    return 0;
}

int cmd_reconstruct(const Options& o) {
    const auto c = load(o);
    if (o.data.empty()) throw ConfigError("--data is required");
    const auto spectrum = io::read_spectrum(o.data);
    const auto r = reconstruct(c, spectrum, {o.threads});
    const std::string out = o.out.empty() ? c.outputs.image : o.out;
    io::write_image(out, r.image);
    io::write_pgm(with_extension(out, ".pgm"), r.image, o.dynamic_range_db);
    const std::size_t peak = r.image.argmax();
    const Vec2 at = r.image.grid.position(peak);
    json m{{"pixel_count", r.image.grid.size()},
           {"grid", r.image.grid.is_polar() ? "polar" : "cartesian"},
           {"algo", to_string(c.algo)},
           {"measures", measures_json(r.measures)},
           {"bytes_prepared", r.bytes_prepared},
           {"load_s", r.load_s},
           {"bp_s", r.bp_s},
           {"peak_magnitude", r.image.max_magnitude()},
           {"argmax", {{"index", peak}, {"x", at.x}, {"y", at.y}}},
           {"singular_pixels", r.stats.singular_pixels.size()}};
    write_json(with_extension(out, ".json"), m);
    std::printf("wrote %s: %zu pixels, peak %.6g at (%.4f, %.4f), load %.4f s, bp %.4f s\n", out.c_str(),
                r.image.grid.size(), r.image.max_magnitude(), at.x, at.y, r.load_s, r.bp_s);
    return 0;
}

/// Brings two images onto one grid. A polar image is resampled onto the other image's
/// Cartesian grid; magnitudes are taken from the resampler.
struct Aligned {
    ImageGrid grid;
    std::vector<float> mag_a;
    std::vector<float> mag_b;
    std::vector<std::uint8_t> mask;
};

Aligned align(const SarImage& a, const SarImage& b) {
    if (a.grid == b.grid) return {a.grid, a.magnitude(), b.magnitude(), {}};
    if (a.grid.is_polar() && b.grid.is_cartesian()) {
        auto r = resample_to_cartesian(a, b.grid);
        if (r.covered == 0) throw DataError("compare: images do not overlap");
        return {b.grid, r.magnitude, b.magnitude(), r.coverage};
    }
    if (a.grid.is_cartesian() && b.grid.is_polar()) {
        auto r = resample_to_cartesian(b, a.grid);
        if (r.covered == 0) throw DataError("compare: images do not overlap");
        return {a.grid, a.magnitude(), r.magnitude, r.coverage};
    }
    throw DataError("compare: images are on different grids and cannot be resampled onto each other");
}

int cmd_compare(const Options& o) {
    if (o.images.size() != 2) throw ConfigError("compare needs exactly two image files");
    const auto a = io::read_image(o.images[0]);
    const auto b = io::read_image(o.images[1]);
    const auto al = align(a, b);
    const auto d = image_diff_db(al.mag_a, al.mag_b, al.mask);
    json report{{"a", o.images[0]},
                {"b", o.images[1]},
                {"pixels_compared", d.counted},
                {"median_db", d.median},
                {"p05_db", d.p05},
                {"p95_db", d.p95}};
    if (!o.config.empty()) {
        const auto c = load(o);
        if (!c.regions.signal.empty() && c.regions.noise) {
            auto with_mag = [&](const std::vector<float>& mag) {
                SarImage img(al.grid);
                for (std::size_t i = 0; i < mag.size(); ++i) img.values[i] = mag[i];
                return img;
            };
            const auto snr_a = region_snr(with_mag(al.mag_a), c.regions.signal, *c.regions.noise);
            const auto snr_b = region_snr(with_mag(al.mag_b), c.regions.signal, *c.regions.noise);
            json regions = json::array();
            for (std::size_t i = 0; i < snr_a.size(); ++i) {
                regions.push_back({{"name", c.regions.signal[i].name},
                                   {"snr_a_db", snr_a[i]},
                                   {"snr_b_db", snr_b[i]},
                                   {"delta_db", snr_a[i] - snr_b[i]}});
            }
            report["regions"] = regions;
        }
    }
    const std::string out = o.out.empty() ? "compare.json" : o.out;
    write_json(out, report);
    // Signed difference map: 0 dB at mid grey, +-dynamic_range/2 at the ends.
    std::vector<std::uint8_t> gray(d.db.size(), 0);
    const double half = 0.5 * o.dynamic_range_db;
    for (std::size_t i = 0; i < gray.size(); ++i) {
        if (!al.mask.empty() && !al.mask[i]) continue;
        const double v = std::clamp(static_cast<double>(d.db[i]), -half, half);
        gray[i] = static_cast<std::uint8_t>(std::lround(127.5 + 127.5 * v / half));
    }
    std::ofstream pgm(with_extension(out, ".pgm"), std::ios::binary);
    pgm << io::encode_pgm(gray, io::raster_of(al.grid));
    std::printf("compared %zu pixels: median %.3f dB, p05 %.3f dB, p95 %.3f dB\n", d.counted, d.median, d.p05,
                d.p95);
    return 0;
}

int cmd_bench(const Options& o) {
    const auto c = load(o);
    if (o.reps < 1) throw ConfigError("--reps must be >= 1");
    const auto spectrum = o.data.empty() ? simulate(c, {o.threads}) : io::read_spectrum(o.data);
    const std::string out = o.out.empty() ? "bench.csv" : o.out;
    std::ofstream csv(out);
    if (!csv) throw DataError("cannot open '" + out + "' for writing");
    write_bench_csv_header(csv);
    json summary = json::array();
    for (const auto& bc : bench_matrix(c)) {
        BenchReport r;
        try {
            r = bench_case(c, bc, spectrum, o.reps, {o.threads});
        } catch (const std::exception& e) {
            csv << "# aborted at '" << bc.label << "': " << e.what() << '\n';
            throw;
        }
        write_bench_csv_rows(csv, r);
        csv.flush();
        auto stats = [](const PhaseStats& s) { return json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}}; };
        summary.push_back({{"label", r.label},
                           {"measures", measures_json(bc.measures)},
                           {"repetitions", r.repetitions},
                           {"warmup_excluded", r.warmup_excluded},
                           {"load_s", stats(r.load)},
                           {"bp_s", stats(r.bp)},
                           {"total_s", stats(r.total)},
                           {"bytes_prepared", r.bytes_prepared},
                           {"output_hash", r.output_hash}});
        std::printf("%-8s load %9.5f s  bp %9.5f s  total %9.5f s  %12llu B\n", r.label.c_str(), r.load.mean,
                    r.bp.mean, r.total.mean, static_cast<unsigned long long>(r.bytes_prepared));
    }
    write_json(with_extension(out, ".json"), summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FMCW SAR back-projection"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Pipeline configuration (JSON)");
        sub->add_option("--out", o.out, "Output path");
        sub->add_option("--seed", o.seed, "Override the configured noise seed");
        sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
        sub->add_option("--dynamic-range-db", o.dynamic_range_db, "PGM dynamic range in dB")
            ->check(CLI::PositiveNumber);
    };
    auto* sim = app.add_subcommand("simulate", "Write a simulated beat spectrum (SARBP1)");
    common(sim);
    auto* rec = app.add_subcommand("reconstruct", "Back-project a beat spectrum into an image (SARIM1 + PGM)");
    common(rec);
    rec->add_option("--data", o.data, "Beat spectrum file")->required();
    auto* cmp = app.add_subcommand("compare", "dB difference and region SNR of two images");
    common(cmp);
    cmp->add_option("images", o.images, "Image A and reference image B")->expected(2)->required();
    auto* bench = app.add_subcommand("bench", "Time every measure against the reference");
    common(bench);
    bench->add_option("--data", o.data, "Beat spectrum file (simulated from the config if omitted)");
    bench->add_option("--reps", o.reps, "Repetitions per configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(o);
        if (*rec) return cmd_reconstruct(o);
        if (*cmp) return cmd_compare(o);
        if (*bench) return cmd_bench(o);
    } catch (const DataError& e) {
        std::fprintf(stderr, "sarbp: data error: %s\n", e.what());
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "sarbp: configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sarbp: internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}
