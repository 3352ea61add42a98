#pragma once

#include <cmath>

namespace fmcwsar {

/// Plain 2-D vector. Geometry in this library is planar throughout.
template <typename T>
struct Vec2T {
    T x{};
    T y{};

    constexpr Vec2T() = default;
    constexpr Vec2T(T x_, T y_) : x(x_), y(y_) {}

    template <typename U>
    constexpr explicit Vec2T(const Vec2T<U>& o) : x(static_cast<T>(o.x)), y(static_cast<T>(o.y)) {}

    constexpr Vec2T& operator+=(const Vec2T& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2T& operator-=(const Vec2T& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2T& operator*=(T s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2T operator+(Vec2T a, const Vec2T& b) { return a += b; }
    friend constexpr Vec2T operator-(Vec2T a, const Vec2T& b) { return a -= b; }
    friend constexpr Vec2T operator*(Vec2T a, T s) { return a *= s; }
    friend constexpr Vec2T operator*(T s, Vec2T a) { return a *= s; }
    friend constexpr bool operator==(const Vec2T&, const Vec2T&) = default;
};

using Vec2 = Vec2T<double>;
using Vec2f = Vec2T<float>;

template <typename T>
constexpr T dot(const Vec2T<T>& a, const Vec2T<T>& b) { return a.x * b.x + a.y * b.y; }

template <typename T>
inline T norm(const Vec2T<T>& a) { return std::hypot(a.x, a.y); }

template <typename T>
inline T distance(const Vec2T<T>& a, const Vec2T<T>& b) { return norm(a - b); }

/// Rotate a platform-frame offset (x forward, y left) into the world frame given a unit heading.
template <typename T>
constexpr Vec2T<T> rotate_by_heading(const Vec2T<T>& offset, const Vec2T<T>& heading) {
    return {heading.x * offset.x - heading.y * offset.y, heading.y * offset.x + heading.x * offset.y};
}

}  // namespace fmcwsar
