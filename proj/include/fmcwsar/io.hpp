#pragma once

// Binary file formats (all little-endian):
//
//   Beat spectrum  "SARBP1\0\0", u32 N_m, u32 N_rx, u32 N_f, f64 f_start, f64 f_step,
//                  then N_m*N_rx*N_f complex float32 (re, im), m-major, then rx, then bin.
//   SAR image      "SARIM1\0\0", u32 kind (0 Cartesian, 1 polar), grid fields as f64 in
//                  declaration order, u64 pixel count, complex float32 values.
//
// Plus an 8-bit PGM export of the dB magnitude.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "simulator.hpp"

namespace fmcwsar::io {

inline constexpr std::array<char, 8> kSpectrumMagic{'S', 'A', 'R', 'B', 'P', '1', '\0', '\0'};
inline constexpr std::array<char, 8> kImageMagic{'S', 'A', 'R', 'I', 'M', '1', '\0', '\0'};
inline constexpr std::size_t kSpectrumHeaderBytes = 8 + 3 * 4 + 2 * 8;

namespace detail {

class Writer {
public:
    void raw(std::span<const char> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
    template <typename U>
    void uint(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u32(std::uint32_t v) { uint(v); }
    void u64(std::uint64_t v) { uint(v); }
    void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
    const std::string& bytes() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    explicit Reader(std::string data, std::string what) : data_(std::move(data)), what_(std::move(what)) {}

    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) throw DataError(what_ + ": truncated file");
    }
    void expect_magic(const std::array<char, 8>& magic) {
        need(8);
        if (std::memcmp(data_.data() + pos_, magic.data(), 8) != 0) throw DataError(what_ + ": bad magic");
        pos_ += 8;
    }
    template <typename U>
    U uint() {
        need(sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(U);
        return v;
    }
    std::uint32_t u32() { return uint<std::uint32_t>(); }
    std::uint64_t u64() { return uint<std::uint64_t>(); }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    std::string data_;
    std::string what_;
    std::size_t pos_ = 0;
};

inline std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void spit(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw DataError("write to '" + path + "' failed");
}

inline void complex_values(Writer& w, std::span<const std::complex<float>> values) {
    for (const auto& v : values) {
        w.f32(v.real());
        w.f32(v.imag());
    }
}

inline std::vector<std::complex<float>> complex_values(Reader& r, std::uint64_t count) {
    if (r.remaining() != count * 8) throw DataError("payload size does not match header dimensions");
    std::vector<std::complex<float>> out(count);
    for (auto& v : out) {
        const float re = r.f32();
        const float im = r.f32();
        v = {re, im};
    }
    return out;
}

inline std::size_t count_field(double v, const char* name) {
    if (!(v >= 1) || v != std::floor(v) || v > 1e12) throw DataError(std::string("invalid grid count ") + name);
    return static_cast<std::size_t>(v);
}

}  // namespace detail

inline std::string encode_spectrum(const BeatSpectrum& s) {
    validate(s);
    detail::Writer w;
    w.raw(kSpectrumMagic);
    w.u32(static_cast<std::uint32_t>(s.num_chirps));
    w.u32(static_cast<std::uint32_t>(s.num_rx));
    w.u32(static_cast<std::uint32_t>(s.num_bins));
    w.f64(s.f_start);
    w.f64(s.f_step);
    detail::complex_values(w, s.data);
    return w.bytes();
}

inline BeatSpectrum decode_spectrum(std::string bytes) {
    detail::Reader r(std::move(bytes), "beat spectrum");
    r.expect_magic(kSpectrumMagic);
    BeatSpectrum s;
    s.num_chirps = r.u32();
    s.num_rx = r.u32();
    s.num_bins = r.u32();
    s.f_start = r.f64();
    s.f_step = r.f64();
    if (s.num_chirps == 0 || s.num_rx == 0 || s.num_bins == 0) throw DataError("beat spectrum: zero dimension");
    if (!(s.f_step > 0) || !std::isfinite(s.f_start)) throw DataError("beat spectrum: invalid frequency axis");
    s.data = detail::complex_values(r, static_cast<std::uint64_t>(s.num_chirps) * s.num_rx * s.num_bins);
    return s;
}

inline void write_spectrum(const std::string& path, const BeatSpectrum& s) { detail::spit(path, encode_spectrum(s)); }
inline BeatSpectrum read_spectrum(const std::string& path) { return decode_spectrum(detail::slurp(path)); }

inline std::string encode_image(const SarImage& img) {
    detail::Writer w;
    w.raw(kImageMagic);
    if (img.grid.is_cartesian()) {
        const auto& c = img.grid.cartesian();
        w.u32(0);
        for (double v : {c.origin.x, c.origin.y, c.dx, c.dy, static_cast<double>(c.nx), static_cast<double>(c.ny)}) {
            w.f64(v);
        }
    } else {
        const auto& p = img.grid.polar();
        w.u32(1);
        for (double v : {p.centre.x, p.centre.y, p.r_min, p.dr, static_cast<double>(p.n_r), p.theta_min, p.dtheta,
                         static_cast<double>(p.n_theta)}) {
            w.f64(v);
        }
    }
    w.u64(img.values.size());
    detail::complex_values(w, img.values);
    return w.bytes();
}

inline SarImage decode_image(std::string bytes) {
    detail::Reader r(std::move(bytes), "SAR image");
    r.expect_magic(kImageMagic);
    const std::uint32_t kind = r.u32();
    auto grid = [&]() -> ImageGrid {
        try {
            if (kind == 0) {
                CartesianSpec c;
                c.origin.x = r.f64();
                c.origin.y = r.f64();
                c.dx = r.f64();
                c.dy = r.f64();
                c.nx = detail::count_field(r.f64(), "nx");
                c.ny = detail::count_field(r.f64(), "ny");
                return ImageGrid(c);
            }
            if (kind == 1) {
                PolarSpec p;
                p.centre.x = r.f64();
                p.centre.y = r.f64();
                p.r_min = r.f64();
                p.dr = r.f64();
                p.n_r = detail::count_field(r.f64(), "n_r");
                p.theta_min = r.f64();
                p.dtheta = r.f64();
                p.n_theta = detail::count_field(r.f64(), "n_theta");
                return ImageGrid(p);
            }
        } catch (const std::invalid_argument& e) {
            throw DataError(std::string("SAR image: ") + e.what());
        }
        throw DataError("SAR image: unknown grid kind " + std::to_string(kind));
    }();
    const std::uint64_t count = r.u64();
    if (count != grid.size()) throw DataError("SAR image: pixel count does not match grid");
    return SarImage(grid, detail::complex_values(r, count));
}

inline void write_image(const std::string& path, const SarImage& img) { detail::spit(path, encode_image(img)); }
inline SarImage read_image(const std::string& path) { return decode_image(detail::slurp(path)); }

/// Row layout of a raster for PGM export: width x height, row 0 printed first.
struct Raster {
    std::size_t width;
    std::size_t height;
    bool flip_rows;  ///< print the last row first (so +y points up for Cartesian grids)
};

inline Raster raster_of(const ImageGrid& g) {
    if (g.is_cartesian()) return {g.cartesian().nx, g.cartesian().ny, true};
    return {g.polar().n_theta, g.polar().n_r, true};
}

/// 8-bit P5 graymap of arbitrary per-pixel bytes.
inline std::string encode_pgm(std::span<const std::uint8_t> pixels, Raster raster) {
    std::ostringstream out;
    out << "P5\n" << raster.width << ' ' << raster.height << "\n255\n";
    std::string s = out.str();
    for (std::size_t row = 0; row < raster.height; ++row) {
        const std::size_t src = raster.flip_rows ? raster.height - 1 - row : row;
        const auto* first = pixels.data() + src * raster.width;
        s.append(reinterpret_cast<const char*>(first), raster.width);
    }
    return s;
}

/// 20*log10(|P|/max) clipped to [-dynamic_range_db, 0] and mapped onto 0..255.
inline std::vector<std::uint8_t> db_gray(std::span<const float> magnitude, double dynamic_range_db) {
    if (!(dynamic_range_db > 0)) throw std::invalid_argument("dynamic range must be > 0 dB");
    const float peak = magnitude.empty() ? 0.0f : *std::max_element(magnitude.begin(), magnitude.end());
    std::vector<std::uint8_t> out(magnitude.size(), 0);
    if (!(peak > 0)) return out;
    for (std::size_t i = 0; i < magnitude.size(); ++i) {
        if (!(magnitude[i] > 0)) continue;
        const double db = std::clamp(20.0 * std::log10(magnitude[i] / peak), -dynamic_range_db, 0.0);
        out[i] = static_cast<std::uint8_t>(std::lround(255.0 * (db + dynamic_range_db) / dynamic_range_db));
    }
    return out;
}

inline void write_pgm(const std::string& path, const SarImage& img, double dynamic_range_db = 60.0) {
    const auto mag = img.magnitude();
    detail::spit(path, encode_pgm(db_gray(mag, dynamic_range_db), raster_of(img.grid)));
}

}  // namespace fmcwsar::io
