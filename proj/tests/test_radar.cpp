#include <gtest/gtest.h>

#include <fmcwsar/radar.hpp>

using namespace fmcwsar;

TEST(RadarParams, FullScaleChirpRate) {
    // 931e6 / 102.4e-6
    EXPECT_DOUBLE_EQ(chirp_rate(full_scale_params()), 9.091796875e12);
}

TEST(RadarParams, MeasurementTime) {
    auto p = full_scale_params();
    EXPECT_NEAR(measurement_time(p), 0.1092608, 1e-12);
    EXPECT_LE(std::abs(measurement_time(p) - 0.1093) / 0.1093, 5e-4);
    p.num_chirps = 8192;
    EXPECT_NEAR(measurement_time(p), 0.8740864, 1e-12);
}

TEST(RadarParams, DerivedWaveform) {
    const auto wf = derived_waveform(full_scale_params());
    EXPECT_NEAR(wf.wavelength, 3.91374e-3, 1e-8);
    EXPECT_NEAR(wf.range_resolution, 0.161005, 1e-6);
    EXPECT_NEAR(wf.wavelength / 4, 0.978435e-3, 1e-9);
    EXPECT_DOUBLE_EQ(wf.bin_spacing, 10e6 / 1024);
}

TEST(RadarParams, ValidationRejects) {
    auto p = full_scale_params();
    EXPECT_NO_THROW(validate(p));
    p.chirp_duration = 2 * p.pri;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = full_scale_params();
    p.num_samples = 1000;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = full_scale_params();
    p.f0 = 0;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = full_scale_params();
    p.num_rx = 0;
    EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(RadarParams, ScaledKeepsWaveform) {
    const auto p = scaled_params(64, 4, 128);
    EXPECT_NO_THROW(validate(p));
    EXPECT_DOUBLE_EQ(p.sample_rate, 1.25e6);
    EXPECT_DOUBLE_EQ(chirp_rate(p), chirp_rate(full_scale_params()));
}

TEST(Trajectory, StraightPassCentredAndLength) {
    const auto p = scaled_params(64, 4, 128);
    const auto t = straight_pass(p, 10.0, {1, 2}, {0, 1});
    ASSERT_EQ(t.size(), 64u);
    EXPECT_NO_THROW(validate(t, p));
    EXPECT_NEAR(aperture_centre(t).x, 1.0, 1e-12);
    EXPECT_NEAR(aperture_centre(t).y, 2.0, 1e-12);
    EXPECT_NEAR(aperture_length(t), 63 * p.pri * 10.0, 1e-12);
    EXPECT_NEAR(mean_velocity(t).y, 10.0, 1e-12);
}

TEST(Trajectory, AcceleratingRampsLinearly) {
    const auto p = scaled_params(101, 1, 128);
    const auto t = accelerating_pass(p, 9.0, 11.0);
    EXPECT_NEAR(t.velocities.front().x, 9.0, 1e-12);
    EXPECT_NEAR(t.velocities.back().x, 11.0, 1e-12);
    EXPECT_NEAR(t.velocities[50].x, 10.0, 1e-12);
    // Displacement over the pass equals the mean speed times the duration.
    EXPECT_NEAR(aperture_length(t), 10.0 * 100 * p.pri, 1e-12);
}

TEST(Trajectory, ArcStaysOnCircle) {
    const auto p = scaled_params(64, 1, 128);
    const auto t = arc_pass(p, 5.0, 10.0);
    const Vec2 pivot{0, 5};
    for (std::size_t m = 0; m < t.size(); ++m) {
        EXPECT_NEAR(distance(t.poses[m], pivot), 5.0, 1e-12);
        EXPECT_NEAR(dot(t.velocities[m], t.poses[m] - pivot), 0.0, 1e-9);
        EXPECT_NEAR(norm(t.headings[m]), 1.0, 1e-12);
    }
    EXPECT_NO_THROW(validate(t, p));
}

TEST(Trajectory, ValidationRejectsBadHeadingAndLength) {
    const auto p = scaled_params(4, 1, 128);
    auto t = straight_pass(p, 1.0);
    t.headings[2] = {1.0, 1e-3};
    EXPECT_THROW(validate(t, p), std::invalid_argument);
    t = straight_pass(p, 1.0);
    t.poses.pop_back();
    EXPECT_THROW(validate(t, p), std::invalid_argument);
}

TEST(Array, PositionsFollowHeading) {
    const auto p = scaled_params(2, 3, 128);
    auto t = straight_pass(p, 0.0, {0, 0}, {0, 1});
    const auto g = uniform_linear_array(3, 0.01, {0.1, 0.0});
    const auto q = antenna_positions(t, g, 0, 0);
    // Platform x axis points along +y world, so the forward offset lands on +y.
    EXPECT_NEAR(q.tx.x, 0.0, 1e-15);
    EXPECT_NEAR(q.tx.y, 0.1, 1e-15);
    EXPECT_NEAR(q.rx.y, 0.09, 1e-15);
    EXPECT_THROW(antenna_positions(t, g, 2, 0), std::out_of_range);
    EXPECT_THROW(antenna_positions(t, g, 0, 3), std::out_of_range);
    EXPECT_THROW(validate(uniform_linear_array(2, 0.01), p), std::invalid_argument);
}
