#include "procgen/geom.hpp"

namespace procgen {

Mat4 translate(const Vec3& t) {
    Mat4 r = Mat4::identity();
    r.at(0, 3) = t.x;
    r.at(1, 3) = t.y;
    r.at(2, 3) = t.z;
    return r;
}

Mat4 scale(const Vec3& s) {
    Mat4 r = Mat4::identity();
    r.at(0, 0) = s.x;
    r.at(1, 1) = s.y;
    r.at(2, 2) = s.z;
    return r;
}

Mat4 rotate(Real rad, const Vec3& axis) {
    Vec3 u = normalized(axis);
    Real c = std::cos(rad), s = std::sin(rad), t = 1 - c;
    Mat4 r = Mat4::identity();
    r.at(0, 0) = c + u.x * u.x * t;
    r.at(0, 1) = u.x * u.y * t - u.z * s;
    r.at(0, 2) = u.x * u.z * t + u.y * s;
    r.at(1, 0) = u.y * u.x * t + u.z * s;
    r.at(1, 1) = c + u.y * u.y * t;
    r.at(1, 2) = u.y * u.z * t - u.x * s;
    r.at(2, 0) = u.z * u.x * t - u.y * s;
    r.at(2, 1) = u.z * u.y * t + u.x * s;
    r.at(2, 2) = c + u.z * u.z * t;
    return r;
}

Mat4 rotate_align(const Vec3& a, const Vec3& b) {
    Vec3 u = normalized(a), v = normalized(b);
    Real c = dot(u, v);
    if (c > 1 - 1e-12) return Mat4::identity();
    if (c < -1 + 1e-12) return rotate(kPi, perp(u));  // antiparallel: 180 deg about any normal
    Vec3 axis = cross(u, v);
    return rotate(std::atan2(norm(axis), c), axis);
}

Quat Quat::from_axis_angle(const Vec3& axis, Real rad) {
    Vec3 u = procgen::normalized(axis);  // the member fn shadows the free one here
    Real h = rad * 0.5;
    Real s = std::sin(h);
    return {std::cos(h), u.x * s, u.y * s, u.z * s};
}

Vec3 Quat::rotate(const Vec3& v) const {
    // q v q* via the expanded two-cross-product form.
    Vec3 qv{x, y, z};
    Vec3 t = cross(qv, v) * 2;
    return v + t * w + cross(qv, t);
}

Mat4 Quat::to_mat4() const {
    Mat4 r = Mat4::identity();
    Real xx = x * x, yy = y * y, zz = z * z;
    Real xy = x * y, xz = x * z, yz = y * z;
    Real wx = w * x, wy = w * y, wz = w * z;
    r.at(0, 0) = 1 - 2 * (yy + zz);
    r.at(0, 1) = 2 * (xy - wz);
    r.at(0, 2) = 2 * (xz + wy);
    r.at(1, 0) = 2 * (xy + wz);
    r.at(1, 1) = 1 - 2 * (xx + zz);
    r.at(1, 2) = 2 * (yz - wx);
    r.at(2, 0) = 2 * (xz - wy);
    r.at(2, 1) = 2 * (yz + wx);
    r.at(2, 2) = 1 - 2 * (xx + yy);
    return r;
}

Quat slerp(const Quat& a, const Quat& b, Real t) {
    Quat bb = b;
    Real d = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
    if (d < 0) {  // take the short arc
        bb = {-b.w, -b.x, -b.y, -b.z};
        d = -d;
    }
    if (d > 1 - 1e-10) {  // nearly parallel: nlerp to avoid division blowup
        Quat r{lerp(a.w, bb.w, t), lerp(a.x, bb.x, t), lerp(a.y, bb.y, t), lerp(a.z, bb.z, t)};
        return r.normalized();
    }
    Real theta = std::acos(std::clamp(d, Real(-1), Real(1)));
    Real s = std::sin(theta);
    Real wa = std::sin((1 - t) * theta) / s;
    Real wb = std::sin(t * theta) / s;
    return {wa * a.w + wb * bb.w, wa * a.x + wb * bb.x, wa * a.y + wb * bb.y,
            wa * a.z + wb * bb.z};
}

Vec3 bezier_eval(const BezierSegment& seg, Real t) {
    if (t < 0 || t > 1) throw std::invalid_argument("bezier_eval: t outside [0,1]");
    Vec3 a = lerp(seg.p0, seg.p1, t);
    Vec3 b = lerp(seg.p1, seg.p2, t);
    Vec3 c = lerp(seg.p2, seg.p3, t);
    Vec3 d = lerp(a, b, t);
    Vec3 e = lerp(b, c, t);
    return lerp(d, e, t);
}

Vec3 perp(const Vec3& v) {
    Real n = norm(v);
    if (n <= 0) throw std::invalid_argument("perp: zero-length vector");
    // Cross with the axis v is least aligned with; stable for all inputs.
    Vec3 u = v / n;
    Real ax = std::abs(u.x), ay = std::abs(u.y), az = std::abs(u.z);
    Vec3 other = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    return normalized(cross(u, other));
}

std::vector<Vec3> distribute_points_sphere(int n) {
    if (n <= 0) throw std::invalid_argument("distribute_points_sphere: n must be positive");
    std::vector<Vec3> pts;
    pts.reserve(static_cast<size_t>(n));
    // The offset lattice below puts nothing on the poles, so pin the tiny
    // cases by hand (n=2 must come out antipodal).
    if (n == 1) return {{0, 0, 1}};
    if (n == 2) return {{0, 0, 1}, {0, 0, -1}};
    for (int i = 0; i < n; ++i) {
        Real z = 1 - (2.0 * i + 1) / n;
        Real r = std::sqrt(std::max(Real(0), 1 - z * z));
        Real phi = kGoldenAngle * i;
        pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return pts;
}

}  // namespace procgen
