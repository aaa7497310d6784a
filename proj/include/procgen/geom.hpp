#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "procgen/error.hpp"

namespace procgen {

// One global real type for all geometry.
using Real = double;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kGoldenAngle = 2.39996322972865332;  // pi * (3 - sqrt(5))

struct Vec3 {
    Real x = 0, y = 0, z = 0;

    constexpr Vec3() = default;
    constexpr Vec3(Real x_, Real y_, Real z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(Real s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(Real s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(Real s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(Real s, const Vec3& v) { return v * s; }

inline Real dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Real norm2(const Vec3& v) { return dot(v, v); }
inline Real norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline Real distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& v) {
    Real n = norm(v);
    if (n <= 0) throw std::invalid_argument("normalized: zero-length vector");
    return v / n;
}

struct RGBA {
    float r = 1, g = 1, b = 1, a = 1;
};

// Row-major homogeneous 4x4 matrix. Affine constructors keep the last
// row (0,0,0,1).
struct Mat4 {
    std::array<Real, 16> m{};

    static Mat4 identity() {
        Mat4 r;
        r.m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
        return r;
    }

    Real& at(int row, int col) { return m[row * 4 + col]; }
    Real at(int row, int col) const { return m[row * 4 + col]; }

    Mat4 operator*(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Real s = 0;
                for (int k = 0; k < 4; ++k) s += at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    Vec3 transform_point(const Vec3& p) const {
        return {m[0] * p.x + m[1] * p.y + m[2] * p.z + m[3],
                m[4] * p.x + m[5] * p.y + m[6] * p.z + m[7],
                m[8] * p.x + m[9] * p.y + m[10] * p.z + m[11]};
    }

    Vec3 transform_dir(const Vec3& d) const {
        return {m[0] * d.x + m[1] * d.y + m[2] * d.z,
                m[4] * d.x + m[5] * d.y + m[6] * d.z,
                m[8] * d.x + m[9] * d.y + m[10] * d.z};
    }

    bool operator==(const Mat4& o) const { return m == o.m; }
};

Mat4 translate(const Vec3& t);
Mat4 scale(const Vec3& s);
Mat4 rotate(Real rad, const Vec3& axis);        // axis need not be unit; zero axis throws
Mat4 rotate_align(const Vec3& a, const Vec3& b);  // maps normalized(a) onto normalized(b)

struct Quat {
    Real w = 1, x = 0, y = 0, z = 0;

    static Quat from_axis_angle(const Vec3& axis, Real rad);

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    Quat normalized() const {
        Real n = std::sqrt(w * w + x * x + y * y + z * z);
        if (n <= 0) throw std::invalid_argument("Quat::normalized: zero quaternion");
        return {w / n, x / n, y / n, z / n};
    }

    Vec3 rotate(const Vec3& v) const;
    Mat4 to_mat4() const;
    bool operator==(const Quat& o) const { return w == o.w && x == o.x && y == o.y && z == o.z; }
};

Quat slerp(const Quat& a, const Quat& b, Real t);

struct BezierSegment {
    Vec3 p0, p1, p2, p3;
};

// De Casteljau evaluation; t outside [0,1] throws.
Vec3 bezier_eval(const BezierSegment& seg, Real t);

// Unit vector orthogonal to v; zero v throws.
Vec3 perp(const Vec3& v);

// n near-equally distributed unit points, deterministic for fixed n.
// Golden-spiral with poles pinned, so n=2 is exactly antipodal.
std::vector<Vec3> distribute_points_sphere(int n);

inline Real lerp(Real a, Real b, Real t) { return a + (b - a) * t; }
inline Vec3 lerp(const Vec3& a, const Vec3& b, Real t) { return a + (b - a) * t; }

inline Real smoothstep(Real edge0, Real edge1, Real x) {
    Real t = std::clamp((x - edge0) / (edge1 - edge0), Real(0), Real(1));
    return t * t * (3 - 2 * t);
}

// Cubic ease in/out on [0,1].
inline Real ease_cubic(Real t) {
    t = std::clamp(t, Real(0), Real(1));
    return t < 0.5 ? 4 * t * t * t : 1 - std::pow(-2 * t + 2, Real(3)) / 2;
}

}  // namespace procgen
