#include "procgen/turtle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "procgen/error.hpp"

namespace procgen {

namespace {

constexpr Real kGrowthFloor = 1e-3;
constexpr Real kWeldScale = 1e-12;

Vec3 pt(Real x, Real y) { return {x, y, 0}; }

CrossSection make_circle() {
    // 4/3 * tan(pi/8): cubic arc through the quadrant midpoint.
    const Real k = 0.5522847498307936;
    CrossSection c;
    c.segments = {
        {pt(1, 0), pt(1, k), pt(k, 1), pt(0, 1)},
        {pt(0, 1), pt(-k, 1), pt(-1, k), pt(-1, 0)},
        {pt(-1, 0), pt(-1, -k), pt(-k, -1), pt(0, -1)},
        {pt(0, -1), pt(k, -1), pt(1, -k), pt(1, 0)},
    };
    return c;
}

CrossSection make_lobed() {
    // Four bulges on the axes, waists on the diagonals, smoothed by a
    // closed Catmull-Rom loop through the eight anchors.
    std::vector<Vec3> p;
    for (int i = 0; i < 8; ++i) {
        Real r = (i % 2 == 0) ? 1.2 : 0.75;
        Real a = Real(i) * (kPi / 4);
        p.push_back(pt(r * std::cos(a), r * std::sin(a)));
    }
    CrossSection c;
    for (int i = 0; i < 8; ++i) {
        const Vec3& p0 = p[i];
        const Vec3& p3 = p[(i + 1) % 8];
        Vec3 b1 = p0 + (p[(i + 1) % 8] - p[(i + 7) % 8]) * (Real(1) / 6);
        Vec3 b2 = p3 - (p[(i + 2) % 8] - p[i]) * (Real(1) / 6);
        c.segments.push_back({p0, b1, b2, p3});
    }
    return c;
}

}  // namespace

Vec3 CrossSection::eval(Real t) const {
    if (segments.empty()) throw std::invalid_argument("CrossSection::eval: empty profile");
    t -= std::floor(t);
    Real x = t * Real(segments.size());
    int i = std::min(int(x), int(segments.size()) - 1);
    return bezier_eval(segments[std::size_t(i)], x - Real(i));
}

const CrossSection& cross_section(int index) {
    static const CrossSection lib[] = {make_circle(), make_lobed()};
    if (index < 0 || index >= cross_section_count())
        throw std::invalid_argument("cross_section: index " + std::to_string(index) +
                                    " out of range");
    return lib[index];
}

int cross_section_count() { return 2; }

Mesh cylinder_mesh(const GeneralisedCylinder& gc, int samples_around, int samples_along) {
    const auto& cps = gc.points;
    int n = int(cps.size());
    if (n < 2) throw std::invalid_argument("cylinder_mesh: need at least 2 control points");
    if (samples_around < 3)
        throw std::invalid_argument("cylinder_mesh: samples_around must be >= 3");
    if (samples_along < 2)
        throw std::invalid_argument("cylinder_mesh: samples_along must be >= 2");

    // Catmull-Rom carrier through the control points, clamped at the ends.
    auto cp = [&](int i) -> const Vec3& {
        return cps[std::size_t(std::clamp(i, 0, n - 1))].pos;
    };
    std::vector<BezierSegment> carrier;
    for (int i = 0; i + 1 < n; ++i) {
        carrier.push_back({cp(i), cp(i) + (cp(i + 1) - cp(i - 1)) * (Real(1) / 6),
                           cp(i + 1) - (cp(i + 2) - cp(i)) * (Real(1) / 6), cp(i + 1)});
    }

    Mesh m;
    int stations = (n - 1) * samples_along + 1;
    std::vector<VertexHandle> prev, cur;
    bool prev_point = false, cur_point = false;
    for (int st = 0; st < stations; ++st) {
        int seg = std::min(st / samples_along, n - 2);
        Real u = Real(st - seg * samples_along) / Real(samples_along);
        const GcPoint& a = cps[std::size_t(seg)];
        const GcPoint& b = cps[std::size_t(seg) + 1];

        Vec3 centre = bezier_eval(carrier[std::size_t(seg)], u);
        Quat frame = slerp(a.frame, b.frame, u);
        Real s = lerp(a.scale, b.scale, u);
        Vec3 el = frame.rotate({1, 0, 0});
        Vec3 eu = frame.rotate({0, 0, 1});
        const CrossSection& sa = cross_section(a.section);
        const CrossSection& sb = cross_section(b.section);

        cur.clear();
        cur_point = std::abs(s) < kWeldScale;
        if (cur_point) {
            cur.push_back(m.add_vertex(centre));
        } else {
            for (int k = 0; k < samples_around; ++k) {
                Real t = Real(k) / Real(samples_around);
                Vec3 c = a.section == b.section ? sa.eval(t) : lerp(sa.eval(t), sb.eval(t), u);
                cur.push_back(m.add_vertex(centre + el * (c.x * s) + eu * (c.y * s)));
            }
        }

        if (st > 0) {
            for (int k = 0; k < samples_around; ++k) {
                int k2 = (k + 1) % samples_around;
                if (!prev_point && !cur_point) {
                    m.add_face(prev[k], cur[k], cur[k2]);
                    m.add_face(prev[k], cur[k2], prev[k2]);
                } else if (!prev_point && cur_point) {
                    m.add_face(prev[k], cur[0], prev[k2]);
                } else if (prev_point && !cur_point) {
                    m.add_face(prev[0], cur[k], cur[k2]);
                }
            }
        }
        prev.swap(cur);
        prev_point = cur_point;
    }
    m.sync();
    return m;
}

Turtle::Turtle() = default;

void Turtle::move(Real d) { pos_ = pos_ + heading() * d; }

void Turtle::pitch(Real a) {
    q_ = (q_ * Quat::from_axis_angle({1, 0, 0}, -a)).normalized();
}

void Turtle::roll(Real a) {
    q_ = (q_ * Quat::from_axis_angle({0, 1, 0}, a)).normalized();
}

void Turtle::yaw(Real a) {
    q_ = (q_ * Quat::from_axis_angle({0, 0, 1}, a)).normalized();
}

void Turtle::push() {
    // The builder moves into the saved state: a branch cannot extend its
    // parent's cylinder, it must begin its own.
    stack_.push_back({pos_, q_, scale_, section_, std::move(builder_)});
    builder_.reset();
}

void Turtle::pop() {
    if (stack_.empty()) throw InterpretError("pop on empty turtle stack");
    State s = std::move(stack_.back());
    stack_.pop_back();
    pos_ = s.pos;
    q_ = s.q;
    scale_ = s.scale;
    section_ = s.section;
    builder_ = std::move(s.builder);  // an unfinished branch cylinder is dropped
}

void Turtle::begin_cylinder() {
    if (builder_) throw InterpretError("begin_cylinder: a cylinder is already active");
    builder_.emplace();
    add_point();
}

void Turtle::add_point() {
    if (!builder_) throw InterpretError("add_point without an active cylinder");
    builder_->points.push_back({pos_, q_, scale_, section_});
}

void Turtle::end_cylinder() {
    if (!builder_) throw InterpretError("end_cylinder without begin_cylinder");
    if (distance(pos_, builder_->points.back().pos) > 1e-12) add_point();
    if (builder_->points.size() >= 2)
        meshes_.push_back(cylinder_mesh(*builder_, around_, along_));
    builder_.reset();
}

void Turtle::set_cross_section(int index) {
    if (index < 0 || index >= cross_section_count())
        throw InterpretError("unknown cross-section index " + std::to_string(index));
    section_ = index;
}

void Turtle::set_scale(Real s) { scale_ = s; }

Real Turtle::last_recorded_scale() const {
    if (builder_ && !builder_->points.empty()) return builder_->points.back().scale;
    return scale_;
}

void Turtle::set_sampling(int around, int along) {
    if (around < 3) throw std::invalid_argument("Turtle: samples_around must be >= 3");
    if (along < 2) throw std::invalid_argument("Turtle: samples_along must be >= 2");
    around_ = around;
    along_ = along;
}

void InterpretationMap::bind(const std::string& name, int arity, Fn fn) {
    bindings[name] = {arity, std::move(fn)};
}

void InterpretationMap::ignore(const std::string& name) { bindings[name] = {-1, nullptr}; }

bool InterpretationMap::contains(const std::string& name) const {
    return bindings.find(name) != bindings.end();
}

InterpretationMap default_interpretation_map() {
    InterpretationMap map;
    map.bind("S", 3, [](Turtle& t, const std::vector<Real>& p, Real g) {
        t.pitch(p[1] * g);
        t.set_scale(lerp(t.last_recorded_scale(), p[2], g));
        t.move(p[0] * g);
        if (t.cylinder_active()) t.add_point();
    });
    map.bind("f", 1, [](Turtle& t, const std::vector<Real>& p, Real g) {
        t.move(p[0] * g);
        if (t.cylinder_active()) t.add_point();
    });
    map.bind("^", 1, [](Turtle& t, const std::vector<Real>& p, Real g) { t.pitch(p[0] * g); });
    map.bind("\\", 1, [](Turtle& t, const std::vector<Real>& p, Real g) { t.roll(p[0] * g); });
    map.bind("G#", 1, [](Turtle& t, const std::vector<Real>& p, Real) {
        t.set_cross_section(int(std::lround(p[0])));
    });
    map.bind("Gsc", 1,
             [](Turtle& t, const std::vector<Real>& p, Real g) { t.set_scale(p[0] * g); });
    map.bind("Gs", 0, [](Turtle& t, const std::vector<Real>&, Real) { t.begin_cylinder(); });
    map.bind("Ge", 0, [](Turtle& t, const std::vector<Real>&, Real) { t.end_cylinder(); });
    map.bind("[", 0, [](Turtle& t, const std::vector<Real>&, Real) { t.push(); });
    map.bind("]", 0, [](Turtle& t, const std::vector<Real>&, Real) { t.pop(); });
    return map;
}

std::vector<Mesh> interpret(const std::vector<Module>& string, const InterpretationMap& map,
                            const GrowthFn& growth, int samples_around, int samples_along) {
    Turtle t;
    t.set_sampling(samples_around, samples_along);
    for (const Module& m : string) {
        auto it = map.bindings.find(m.symbol);
        if (it == map.bindings.end()) {
            if (m.params.empty()) continue;
            throw InterpretError("unmapped symbol '" + m.symbol + "' with parameters");
        }
        const InterpretationMap::Binding& b = it->second;
        if (!b.fn) continue;
        if (b.arity >= 0 && int(m.params.size()) != b.arity)
            throw InterpretError("symbol '" + m.symbol + "' expects " +
                                 std::to_string(b.arity) + " parameter(s), got " +
                                 std::to_string(m.params.size()));
        Real g = growth ? std::max(growth(m), kGrowthFloor) : Real(1);
        b.fn(t, m.params, g);
    }
    if (t.stack_depth() != 0) throw InterpretError("unbalanced '[' at end of interpretation");
    return t.take_meshes();
}

}  // namespace procgen
