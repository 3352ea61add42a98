#include <gtest/gtest.h>

#include <fmcwsar/metrics.hpp>

#include <sstream>

using namespace fmcwsar;

namespace {

SarImage two_level_image() {
    SarImage img(ImageGrid(CartesianSpec{{0, 0}, 1, 1, 10, 10}));
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        const Vec2 p = img.grid.position(i);
        img.values[i] = p.x < 3 ? std::polar(10.0f, 0.1f * i) : std::polar(1.0f, -0.2f * i);
    }
    return img;
}

}  // namespace

TEST(RegionSnr, Definition) {
    const auto img = two_level_image();
    const RegionSpec sig{"sig", {0, 0, 2, 9}};
    const RegionSpec noise{"noise", {5, 0, 9, 9}};
    const std::vector<RegionSpec> regions{sig, noise};
    const auto snr = region_snr(img, regions, noise);
    EXPECT_NEAR(snr[0], 20.0, 1e-5);
    EXPECT_NEAR(snr[1], 0.0, 1e-12);
}

TEST(RegionSnr, InvariantUnderComplexScaling) {
    auto img = two_level_image();
    const RegionSpec sig{"sig", {0, 0, 4, 9}};
    const RegionSpec noise{"noise", {5, 0, 9, 9}};
    const double before = region_snr(img, std::span(&sig, 1), noise)[0];
    for (auto& v : img.values) v *= std::complex<float>(0.25f, -3.0f);
    EXPECT_NEAR(region_snr(img, std::span(&sig, 1), noise)[0], before, 1e-5);
}

TEST(RegionSnr, EmptyRegionRejected) {
    const auto img = two_level_image();
    const RegionSpec sig{"outside", {20, 20, 30, 30}};
    const RegionSpec noise{"noise", {5, 0, 9, 9}};
    EXPECT_THROW(region_snr(img, std::span(&sig, 1), noise), std::invalid_argument);
    EXPECT_THROW(region_pixels(img.grid, {"flat", {1, 1, 1, 5}}), std::invalid_argument);
}

TEST(DiffDb, IdentityAndHalf) {
    const auto a = two_level_image();
    const auto same = image_diff_db(a, a);
    for (float v : same.db) EXPECT_EQ(v, 0.0f);
    EXPECT_EQ(same.median, 0.0);
    auto half = a;
    for (auto& v : half.values) v *= 0.5f;
    const auto d = image_diff_db(half, a);
    for (float v : d.db) EXPECT_NEAR(v, -6.0206, 1e-4);
    EXPECT_NEAR(d.median, -6.0206, 1e-4);
    EXPECT_NEAR(d.p05, -6.0206, 1e-4);
    EXPECT_NEAR(d.p95, -6.0206, 1e-4);
}

TEST(DiffDb, FloorAvoidsInfinity) {
    auto a = two_level_image();
    auto b = a;
    a.values[0] = 0;
    b.values[1] = 0;
    const auto d = image_diff_db(a, b);
    EXPECT_TRUE(std::isfinite(d.db[0]));
    EXPECT_TRUE(std::isfinite(d.db[1]));
    EXPECT_NEAR(d.db[0], 20 * std::log10(1e-12), 1e-3);
}

TEST(DiffDb, GridMismatchRejected) {
    const auto a = two_level_image();
    SarImage b(ImageGrid(CartesianSpec{{0, 0}, 1, 1, 10, 9}));
    EXPECT_THROW(image_diff_db(a, b), std::invalid_argument);
}

TEST(DiffDb, MaskedStatistics) {
    const std::vector<float> a{1, 2, 4, 8};
    const std::vector<float> b{1, 1, 1, 1};
    const std::vector<std::uint8_t> mask{0, 1, 1, 0};
    const auto d = image_diff_db(a, b, mask);
    EXPECT_EQ(d.counted, 2u);
    EXPECT_NEAR(d.median, 0.5 * (20 * std::log10(2.0) + 20 * std::log10(4.0)), 1e-6);
    EXPECT_EQ(d.db[0], 0.0f);
}

TEST(Percentile, Interpolates) {
    EXPECT_DOUBLE_EQ(percentile({3, 1, 2, 4, 5}, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(percentile({1, 2}, 0.5), 1.5);
    EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4, 5}, 0.05), 1.2);
    EXPECT_THROW(percentile({}, 0.5), std::invalid_argument);
}

TEST(Footprint, WindowMatrixAtFullScale) {
    const auto p = full_scale_params();
    const std::uint64_t pix = 1201ull * 1201ull;
    const auto ref = memory_footprint(p, pix, {});
    EXPECT_EQ(ref.get("window"), 5908074496ull);
    EXPECT_GE(static_cast<double>(ref.get("window")) / static_cast<double>(ref.total), 0.97);
    OptimizationConfig vec;
    vec.window_vector = true;
    EXPECT_EQ(memory_footprint(p, pix, vec).get("window"), 4096ull);
}

TEST(Footprint, ClosedFormItems) {
    const auto p = scaled_params(64, 4, 128);
    OptimizationConfig c;
    c.doppler_precompute = true;
    c.rx_subset = std::vector<std::size_t>{0, 2};
    const auto f = memory_footprint(p, 1000, c, 50);
    EXPECT_EQ(f.get("spectrum"), 64u * 2 * 50 * 8);
    EXPECT_EQ(f.get("window"), 1000u * 64 * 4);
    EXPECT_EQ(f.get("doppler_table"), 1000u * 4);
    EXPECT_EQ(f.get("pixel_positions"), 1000u * 8);
    EXPECT_EQ(f.get("antenna_positions"), 64u * 3 * 8);
    EXPECT_EQ(f.get("velocities"), 0u);
    std::uint64_t sum = 0;
    for (const auto& i : f.items) sum += i.bytes;
    EXPECT_EQ(sum, f.total);
    EXPECT_THROW(f.get("nope"), std::out_of_range);
}

TEST(Footprint, LinearInEachDimension) {
    const auto p = scaled_params(64, 4, 128);
    const OptimizationConfig c;
    const auto base = memory_footprint(p, 1000, c, 50);
    // Doubling the pixel count doubles exactly the per-pixel items.
    const auto px2 = memory_footprint(p, 2000, c, 50);
    EXPECT_EQ(px2.get("window"), 2 * base.get("window"));
    EXPECT_EQ(px2.get("pixel_positions"), 2 * base.get("pixel_positions"));
    EXPECT_EQ(px2.get("spectrum"), base.get("spectrum"));
    const auto bins2 = memory_footprint(p, 1000, c, 100);
    EXPECT_EQ(bins2.get("spectrum"), 2 * base.get("spectrum"));
    auto p2 = p;
    p2.num_chirps *= 2;
    const auto m2 = memory_footprint(p2, 1000, c, 50);
    EXPECT_EQ(m2.get("window"), 2 * base.get("window"));
    EXPECT_EQ(m2.get("spectrum"), 2 * base.get("spectrum"));
    EXPECT_EQ(m2.get("velocities"), 2 * base.get("velocities"));
}

namespace {

struct FakeStaged {
    std::uint64_t n;
    std::uint64_t bytes() const { return n; }
};

}  // namespace

TEST(Benchmark, SingleRepetitionStats) {
    const SarImage img(ImageGrid(CartesianSpec{}));
    const auto r = run_benchmark("x", 1, [] { return FakeStaged{123}; }, [&](const FakeStaged&) { return img; });
    EXPECT_EQ(r.samples.size(), 1u);
    EXPECT_EQ(r.bytes_prepared, 123u);
    EXPECT_EQ(r.total.mean, r.total.min);
    EXPECT_EQ(r.total.mean, r.total.max);
    EXPECT_FALSE(r.warmup_excluded);
    std::ostringstream os;
    write_bench_csv_header(os);
    write_bench_csv_rows(os, r);
    const std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "label,rep,load_s,bp_s,total_s,bytes_prepared");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Benchmark, WarmupExcludedAndTotalsConsistent) {
    const SarImage img(ImageGrid(CartesianSpec{}));
    const auto r = run_benchmark("x", 5, [] { return FakeStaged{1}; }, [&](const FakeStaged&) { return img; });
    EXPECT_TRUE(r.warmup_excluded);
    EXPECT_EQ(r.samples.size(), 5u);
    for (const auto& s : r.samples) EXPECT_GE(s.total_s, std::max(s.load_s, s.bp_s));
    EXPECT_LE(r.bp.min, r.bp.mean);
    EXPECT_LE(r.bp.mean, r.bp.max);
}

TEST(Benchmark, NonDeterministicOutputDetected) {
    int calls = 0;
    auto compute = [&](const FakeStaged&) {
        SarImage img(ImageGrid(CartesianSpec{}));
        img.values[0] = static_cast<float>(++calls);
        return img;
    };
    EXPECT_THROW(run_benchmark("x", 2, [] { return FakeStaged{1}; }, compute), std::runtime_error);
    EXPECT_THROW(run_benchmark("x", 0, [] { return FakeStaged{1}; }, compute), std::invalid_argument);
}
