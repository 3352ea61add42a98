#include <gtest/gtest.h>

#include <fmcwsar/simulator.hpp>

#include <random>

using namespace fmcwsar;

namespace {

TimeSamples tone(std::size_t ns, double fs, double f, std::complex<double> a = 1.0) {
    TimeSamples t{1, 1, ns, fs, std::vector<cfloat>(ns)};
    for (std::size_t i = 0; i < ns; ++i) t.data[i] = cfloat(a * std::polar(1.0, 2 * kPi * f * i / fs));
    return t;
}

}  // namespace

TEST(RangeCompress, MatchesDirectDft) {
    std::mt19937 rng(7);
    std::normal_distribution<float> g;
    TimeSamples t{2, 3, 48, 1e6, std::vector<cfloat>(2 * 3 * 48)};
    for (auto& v : t.data) v = {g(rng), g(rng)};
    const auto s = range_compress(t, {WindowFamily::Rectangular}, 2);
    ASSERT_EQ(s.num_bins, 96u);
    EXPECT_DOUBLE_EQ(s.f_step, 1e6 / 96);
    for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t k = 0; k < 96; ++k) {
            std::complex<long double> acc = 0;
            for (std::size_t i = 0; i < 48; ++i) {
                const long double ph = -2.0L * 3.14159265358979323846264L * k * i / 96.0L;
                acc += std::complex<long double>(t.data[r * 48 + i].real(), t.data[r * 48 + i].imag()) *
                       std::complex<long double>(std::cos(ph), std::sin(ph));
            }
            acc /= 48.0L;
            const auto got = s.data[r * 96 + k];
            EXPECT_NEAR(got.real(), static_cast<double>(acc.real()), 1e-5);
            EXPECT_NEAR(got.imag(), static_cast<double>(acc.imag()), 1e-5);
        }
    }
}

TEST(RangeCompress, UnitToneOnBinPeaksAtOne) {
    for (auto fam : {WindowFamily::Rectangular, WindowFamily::Hann, WindowFamily::Kaiser}) {
        const auto s = range_compress(tone(128, 1.28e6, 30 * 1e4), {fam, 5.0});
        EXPECT_NEAR(std::abs(s.data[30]), 1.0, 1e-5) << to_string(fam);
        EXPECT_NEAR(s.frequency(30), 3e5, 1e-9);
    }
}

TEST(RangeCompress, ZeroPadInterleavesUnpaddedBins) {
    const auto t = tone(64, 1e6, 123456.0, {0.3, -0.2});
    const auto a = range_compress(t);
    const auto b = range_compress(t, {WindowFamily::Rectangular}, 8);
    for (std::size_t k = 0; k < 64; ++k) {
        EXPECT_NEAR(std::abs(a.data[k] - b.data[8 * k]), 0.0, 1e-6);
    }
}

TEST(RangeCompress, Rejects) {
    EXPECT_THROW(range_compress(tone(64, 1e6, 0), {WindowFamily::Rectangular}, 0), std::invalid_argument);
    TimeSamples bad{1, 1, 64, 1e6, std::vector<cfloat>(10)};
    EXPECT_THROW(range_compress(bad), std::invalid_argument);
}

// Beat samples of a single stationary-radar scatterer written out from first principles.
TEST(Simulate, BeatSamplesMatchClosedForm) {
    const auto p = scaled_params(3, 2, 32);
    const auto traj = straight_pass(p, 12.0, {0, 0}, {1, 0});
    const auto geom = uniform_linear_array(2, 0.002, {0.01, 0.0});
    const PointScatterer s{{0.7, 3.1}, std::polar(0.8, 0.4)};
    const auto t = simulate_beat_time(p, traj, geom, std::span(&s, 1));
    const long double c = 299792458.0L;
    const long double mu = 931e6L / 102.4e-6L;
    for (std::size_t m = 0; m < 3; ++m) {
        for (std::size_t n = 0; n < 2; ++n) {
            const long double tx_x = traj.poses[m].x + 0.01L;
            const long double rx_x = traj.poses[m].x + 0.01L + (n == 0 ? -0.001L : 0.001L);
            const long double dtx = std::hypot(0.7L - tx_x, 3.1L);
            const long double drx = std::hypot(0.7L - rx_x, 3.1L);
            const long double v = 12.0L * ((0.7L - tx_x) / dtx + (0.7L - rx_x) / drx);
            const long double tau = (dtx + drx) / c;
            const long double fb = mu * tau + 76.6e9L * v / c;
            for (std::size_t i = 0; i < 32; ++i) {
                const long double ph = 2 * 3.14159265358979323846264L * (fb * i / static_cast<long double>(p.sample_rate) + 76.6e9L * tau);
                const std::complex<double> expect =
                    std::polar(0.8, 0.4) * std::complex<double>(std::cos(ph), std::sin(ph));
                const auto got = t.row(m, n)[i];
                EXPECT_NEAR(got.real(), expect.real(), 2e-6);
                EXPECT_NEAR(got.imag(), expect.imag(), 2e-6);
            }
        }
    }
}

TEST(Simulate, PeakAtTargetBeatFrequency) {
    const auto p = scaled_params(1, 1, 128);
    const auto traj = straight_pass(p, 0.0);
    const auto geom = uniform_linear_array(1, 0.0);
    // Round-trip 2R so the beat lands on bin 40 exactly.
    const double fb = 40 * p.sample_rate / 128;
    const double r = fb / chirp_rate(p) * kSpeedOfLight / 2;
    const PointScatterer s{{0, r}, 1.0};
    const auto spec = simulate_spectrum(p, traj, geom, std::span(&s, 1));
    EXPECT_NEAR(std::abs(spec.data[40]), 1.0, 1e-5);
    EXPECT_NEAR(std::abs(spec.data[41]), 0.0, 1e-4);
}

TEST(Simulate, Rejects) {
    const auto p = scaled_params(2, 1, 32);
    const auto traj = straight_pass(p, 0.0);
    const auto geom = uniform_linear_array(1, 0.0);
    EXPECT_THROW(simulate_beat_time(p, traj, geom, {}), std::invalid_argument);
    const PointScatterer zero{{0, 3}, 0.0};
    EXPECT_THROW(simulate_beat_time(p, traj, geom, std::span(&zero, 1)), std::invalid_argument);
    const PointScatterer on_antenna{{0, 0}, 1.0};
    EXPECT_THROW(simulate_beat_time(p, traj, geom, std::span(&on_antenna, 1)), std::invalid_argument);
}

TEST(Noise, DeterministicPerSeedAndCalibrated) {
    BeatSpectrum s{8, 4, 512, 0, 1, std::vector<cfloat>(8 * 4 * 512)};
    const auto a = add_noise(s, 0.5, 42);
    const auto b = add_noise(s, 0.5, 42);
    const auto c = add_noise(s, 0.5, 43);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    double acc = 0;
    for (const auto& v : a.data) acc += v.real() * v.real() + v.imag() * v.imag();
    const double sigma_est = std::sqrt(acc / (2.0 * a.data.size()));
    EXPECT_NEAR(sigma_est, 0.5, 0.01);
    EXPECT_EQ(add_noise(s, 0.0, 1), s);
    EXPECT_THROW(add_noise(s, -1.0, 1), std::invalid_argument);
}
