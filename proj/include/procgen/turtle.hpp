#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procgen/geom.hpp"
#include "procgen/lsystem.hpp"
#include "procgen/mesh.hpp"

namespace procgen {

// Closed cross-section profile: piecewise cubic Bezier loop in the x/y plane,
// evaluated by wrapping parameter t in [0,1).
struct CrossSection {
    std::vector<BezierSegment> segments;
    Vec3 eval(Real t) const;
};

// Built-in profiles: 0 = unit circle, 1 = four-lobed flower.
const CrossSection& cross_section(int index);
int cross_section_count();

// One recorded carrier sample: where the pen was, which way it faced,
// how wide the tube is there and which profile to use.
struct GcPoint {
    Vec3 pos;
    Quat frame;
    Real scale = 1;
    int section = 0;
};

struct GeneralisedCylinder {
    std::vector<GcPoint> points;
};

// Sweeps the cylinder's cross-sections along a Catmull-Rom carrier through
// its control points. samples_along rings per carrier segment plus the final
// one; samples_around vertices per ring. Control points with scale ~0 weld
// their ring to a single tip vertex.
Mesh cylinder_mesh(const GeneralisedCylinder& gc, int samples_around = 16,
                   int samples_along = 8);

class Turtle {
public:
    Turtle();

    void move(Real d);
    void pitch(Real a);  // about L; pitch(-pi/2) tips +Y heading up to +Z
    void roll(Real a);   // about H
    void yaw(Real a);    // about U

    void push();
    void pop();

    void begin_cylinder();
    void add_point();
    void end_cylinder();

    void set_cross_section(int index);
    void set_scale(Real s);

    const Vec3& position() const { return pos_; }
    const Quat& orientation() const { return q_; }
    Vec3 heading() const { return q_.rotate({0, 1, 0}); }
    Vec3 left() const { return q_.rotate({1, 0, 0}); }
    Vec3 up() const { return q_.rotate({0, 0, 1}); }

    Real pending_scale() const { return scale_; }
    int cross_section_index() const { return section_; }
    bool cylinder_active() const { return builder_.has_value(); }
    std::size_t stack_depth() const { return stack_.size(); }
    // Scale of the last recorded control point, or the pending scale if no
    // cylinder is active. What a growing segment's width blends from.
    Real last_recorded_scale() const;

    void set_sampling(int around, int along);
    int samples_around() const { return around_; }
    int samples_along() const { return along_; }

    // Completed cylinders, one mesh each, in end_cylinder order.
    const std::vector<Mesh>& meshes() const { return meshes_; }
    std::vector<Mesh> take_meshes() { return std::move(meshes_); }

private:
    struct State {
        Vec3 pos;
        Quat q;
        Real scale;
        int section;
        std::optional<GeneralisedCylinder> builder;
    };

    Vec3 pos_{0, 0, 0};
    Quat q_{};
    Real scale_ = 1;
    int section_ = 0;
    std::optional<GeneralisedCylinder> builder_;
    std::vector<State> stack_;
    std::vector<Mesh> meshes_;
    int around_ = 16;
    int along_ = 8;
};

// Maps symbol names to turtle actions. A binding with no function is an
// explicit "ignore". Growth factor g is passed through so timed symbols can
// scale their effect while maturing.
struct InterpretationMap {
    using Fn = std::function<void(Turtle&, const std::vector<Real>&, Real g)>;
    struct Binding {
        int arity = 0;
        Fn fn;
    };
    std::map<std::string, Binding, std::less<>> bindings;

    void bind(const std::string& name, int arity, Fn fn);
    void ignore(const std::string& name);
    bool contains(const std::string& name) const;
};

// Bindings for the standard geometric alphabet:
//   S(l,b,w)  segment: pitch b*g, move l*g, record point at width
//             lerp(previous width, w, g)
//   f(x)      move x*g, recording a point when a cylinder is open
//   ^(a) \(a) pitch / roll by a*g
//   G#(n)     select cross-section n
//   Gsc(x)    set scale x*g for subsequent points
//   Gs Ge     begin / end cylinder
//   [ ]       push / pop turtle state
InterpretationMap default_interpretation_map();

using GrowthFn = std::function<Real(const Module&)>;

// Runs the string through a fresh turtle and returns the completed cylinder
// meshes. Unmapped symbols are skipped if parameterless and an error
// otherwise. growth may be empty (everything fully grown).
std::vector<Mesh> interpret(const std::vector<Module>& string,
                            const InterpretationMap& map,
                            const GrowthFn& growth = {}, int samples_around = 16,
                            int samples_along = 8);

}  // namespace procgen
