// Acceptance suite: one line per shipped guarantee, each with a wall-clock
// budget. Run it after any change that touches derivation, meshing or the
// expression language; a red line here means a promised behaviour broke.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "procgen/expr.hpp"
#include "procgen/geom.hpp"
#include "procgen/iso.hpp"
#include "procgen/lsystem.hpp"
#include "procgen/mesh.hpp"
#include "procgen/mesh_ops.hpp"
#include "procgen/noise.hpp"
#include "procgen/primitives.hpp"
#include "procgen/spike.hpp"
#include "procgen/subdivide.hpp"
#include "procgen/turtle.hpp"

namespace {

using namespace procgen;
using Clock = std::chrono::steady_clock;
using EnvMap = std::map<std::string, Real, std::less<>>;

bool fail(const std::string& why) {
    std::cerr << "       detail: " << why << "\n";
    return false;
}

std::string asset(const char* name) {
    return std::string(PROCGEN_ASSET_DIR) + "/" + name;
}

Real mean_radius(const Mesh& m, const std::vector<VertexHandle>& ring) {
    Vec3 c{0, 0, 0};
    for (VertexHandle h : ring) c = c + m.position(h);
    c = c * (Real(1) / Real(ring.size()));
    Real r = 0;
    for (VertexHandle h : ring) r += norm(m.position(h) - c);
    return r / Real(ring.size());
}

// --- three discrete rewrites of the demo grammar --------------------------

bool discrete_trace() {
    LSystem ls = load_lsystem(asset("listing4.lsys"));
    const char* want[] = {
        "B(2) A(4,4.14159)",
        "B(1) A(4,4.14159)",
        "B(0) A(4,4.14159)",
        "C(0) A(4,4.14159)",
    };
    for (int step = 0; step <= 3; ++step) {
        if (step > 0) ls.derive();
        std::string got = to_string(ls.current());
        if (got != want[step])
            return fail("step " + std::to_string(step) + ": got '" + got +
                        "', want '" + want[step] + "'");
    }
    return true;
}

// --- timed coral runs to quiescence with exact counts ---------------------

bool coral_quiescence() {
    LSystem ls = load_lsystem(asset("calcispongiae.lsys"));
    auto spent = [&] {
        for (const Module& m : ls.current()) {
            if (m.symbol == "A") return false;
            if (m.symbol == "B" && (m.params.size() < 3 || m.params[2] != 0))
                return false;
        }
        return true;
    };
    int steps = 0;
    while (!spent() && steps < 1200) {
        ls.derive_timed(0.05);
        ++steps;
    }
    if (!spent()) return fail("still growing after 1200 steps of dt=0.05");

    long branches = 0, stalk_segs = 0;
    for (const Module& m : ls.current()) {
        if (m.symbol == "[") ++branches;
        if (m.symbol == "S" && m.params.size() == 3 && m.params[0] == 2 &&
            m.params[1] == Real(0.02) && m.params[2] == 1)
            ++stalk_segs;
    }
    if (branches != 25)
        return fail("expected 25 branches, counted " + std::to_string(branches));
    if (stalk_segs != 10)
        return fail("expected 10 stalk segments, counted " +
                    std::to_string(stalk_segs));
    return true;
}

// --- primitives audit clean, random surgery stays manifold ----------------

bool primitives_and_surgery() {
    const char* kinds[] = {"icosahedron", "cube", "sphere"};
    for (const char* kind : kinds) {
        Mesh m = create_primitive(kind);
        auto a = m.audit();
        if (!a.manifold || !a.closed || a.euler() != 2)
            return fail(std::string(kind) + " failed its audit");
    }

    Mesh m = create_sphere(2);
    m.sync();
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<Real> scale(0.25, 0.85);
    std::uniform_real_distribution<Real> mag(0.02, 0.12);
    for (int i = 0; i < 100; ++i) {
        auto verts = m.vertexlist();
        VertexHandle v = verts[rng() % verts.size()];
        if (rng() % 2 == 0) {
            inset(m, v, scale(rng));
        } else {
            Vec3 d = m.position(v);
            if (norm(d) < 1e-9) d = {0, 1, 0};
            extrude(m, v, d * (Real(1) / norm(d)), mag(rng));
        }
        if (i % 25 == 24) {
            auto a = m.audit();
            if (!a.manifold || !a.closed || a.euler() != 2)
                return fail("audit broke after op " + std::to_string(i + 1));
        }
    }
    auto a = m.audit();
    if (!a.manifold || !a.closed || a.euler() != 2)
        return fail("final audit failed");
    return true;
}

// --- cell-tuple flips are involutions on a connected orbit ----------------

bool cell_tuple_algebra() {
    Mesh m = create_icosahedron();
    std::vector<Pos> tuples;
    std::set<std::tuple<int, int, int>> seen;
    for (FaceHandle f : m.facelist())
        for (VertexHandle v : m.face_vertices(f))
            for (int e = 0; e < 2; ++e) {
                tuples.push_back(Pos{v, e, f});
                seen.insert({v.idx, e, f.idx});
            }
    if (tuples.size() != 120 || seen.size() != 120)
        return fail("expected 120 distinct tuples, got " +
                    std::to_string(seen.size()));

    const FlipAxis axes[] = {FlipAxis::V, FlipAxis::E, FlipAxis::F};
    for (const Pos& p : tuples)
        for (FlipAxis ax : axes) {
            Pos q = pos_flip(m, p, ax);
            if (q == p) return fail("a flip had a fixed point");
            if (!(pos_flip(m, q, ax) == p))
                return fail("a flip failed to be an involution");
        }

    auto key = [](const Pos& p) {
        return std::tuple<int, int, int>{p.v.idx, p.e, p.f.idx};
    };
    for (const Pos& start : tuples) {
        std::set<std::tuple<int, int, int>> visited{key(start)};
        std::vector<Pos> frontier{start};
        while (!frontier.empty()) {
            Pos p = frontier.back();
            frontier.pop_back();
            for (FlipAxis ax : axes) {
                Pos q = pos_flip(m, p, ax);
                if (visited.insert(key(q)).second) frontier.push_back(q);
            }
        }
        if (visited.size() != 120)
            return fail("flip walk reached only " +
                        std::to_string(visited.size()) + " tuples");
    }
    return true;
}

// --- spike displacement, shrink ratio, ring planarity ---------------------

bool spike_geometry() {
    Mesh m = create_sphere(2);
    m.sync();
    VertexHandle top = m.vertexlist()[0];
    for (VertexHandle v : m.vertexlist())
        if (m.position(v).y > m.position(top).y) top = v;

    SpikeConfig cfg;
    cfg.speed = 4;
    cfg.seg_length = 0.1;
    cfg.num_segs = 5;
    cfg.shrink = 0.8;
    Vec3 p0 = m.position(top);
    SpikeGrower g = spike_new(m, top, cfg);
    const Real dt = Real(1) / 240;
    int guard = 0;
    while (g.update(dt) && ++guard < 100000) {
    }
    if (guard >= 100000) return fail("grower never finished");

    Real along = dot(m.position(g.tip()) - p0, g.direction());
    Real lo = cfg.num_segs * cfg.seg_length;
    Real hi = lo + cfg.num_segs * cfg.speed * dt;
    if (along < lo - 1e-9 || along > hi + 1e-9)
        return fail("tip travelled " + std::to_string(along) +
                    ", expected [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");

    const auto& rings = g.rings();
    if (rings.size() != static_cast<size_t>(cfg.num_segs - 1))
        return fail("expected " + std::to_string(cfg.num_segs - 1) +
                    " rings, got " + std::to_string(rings.size()));
    for (size_t i = 1; i < rings.size(); ++i) {
        Real ratio = mean_radius(m, rings[i]) / mean_radius(m, rings[i - 1]);
        if (std::abs(ratio - cfg.shrink) > 1e-3)
            return fail("ring ratio " + std::to_string(ratio));
    }
    for (const auto& ring : rings) {
        Vec3 c{0, 0, 0};
        for (VertexHandle h : ring) c = c + m.position(h);
        c = c * (Real(1) / Real(ring.size()));
        for (VertexHandle h : ring)
            if (std::abs(dot(m.position(h) - c, g.direction())) > 1e-9)
                return fail("ring not flat to 1e-9");
    }
    return true;
}

// --- implicit unit sphere lands on the surface, watertight ----------------

bool implicit_sphere() {
    Mesh m = iso(16, [](Real x, Real y, Real z) {
        return std::sqrt(x * x + y * y + z * z) - 1;
    });
    if (m.vertex_count() == 0) return fail("empty mesh");
    for (VertexHandle v : m.vertexlist()) {
        Real r = norm(m.position(v));
        if (r < 0.75 || r > 1.25)
            return fail("vertex at radius " + std::to_string(r));
    }
    auto a = m.audit();
    if (!a.manifold || !a.closed || a.boundary_edges != 0)
        return fail("surface is not watertight");
    return true;
}

// --- cylinder sampling radii, face count, section morph -------------------

bool cylinder_sampling() {
    GeneralisedCylinder gc;
    gc.points.push_back({Vec3{0, 0, 0}, Quat{}, 1, 0});
    gc.points.push_back({Vec3{0, 1, 0}, Quat{}, 1, 0});
    Mesh m = cylinder_mesh(gc, 16, 8);
    if (m.face_count() != 2 * 16 * 8)
        return fail("face count " + std::to_string(m.face_count()) +
                    ", want " + std::to_string(2 * 16 * 8));
    for (VertexHandle v : m.vertexlist()) {
        const Vec3& p = m.position(v);
        Real r = std::sqrt(p.x * p.x + p.z * p.z);
        if (std::abs(r - 1) > 1e-3)
            return fail("ring radius " + std::to_string(r));
    }

    gc.points[1].section = 1;
    Mesh morph = cylinder_mesh(gc, 16, 8);
    const CrossSection& ca = cross_section(0);
    const CrossSection& cb = cross_section(1);
    auto verts = morph.vertexlist();
    for (int k = 0; k < 16; ++k) {
        const Vec3& p = morph.position(verts[4 * 16 + k]);
        Vec3 a = ca.eval(Real(k) / 16), b = cb.eval(Real(k) / 16);
        Real wx = (a.x + b.x) / 2, wy = (a.y + b.y) / 2;
        if (std::abs(p.x - wx) > 1e-6 || std::abs(p.z - wy) > 1e-6)
            return fail("midway ring is not the blend of its sections");
    }
    return true;
}

// --- Loop subdivision face/vertex counts ----------------------------------

bool subdivision_counts() {
    Mesh m = create_icosahedron();
    smooth_subdivide(m, 1);
    if (m.face_count() != 80 || m.vertex_count() != 42)
        return fail("level 1 gave F=" + std::to_string(m.face_count()) +
                    " V=" + std::to_string(m.vertex_count()));
    smooth_subdivide(m, 1);
    if (m.face_count() != 320)
        return fail("level 2 gave F=" + std::to_string(m.face_count()));
    return true;
}

// --- same-seed scene replays are byte-identical ---------------------------

bool deterministic_replay() {
    namespace fs = std::filesystem;
    std::string tag = std::to_string(
        std::chrono::duration_cast<std::chrono::microseconds>(
            Clock::now().time_since_epoch())
            .count());
    fs::path a = fs::temp_directory_path() / ("accept_a_" + tag);
    fs::path b = fs::temp_directory_path() / ("accept_b_" + tag);
    auto run = [&](const fs::path& dir) {
        std::string cmd = std::string("\"") + PROCGEN_CLI_PATH +
                          "\" run calcispongiae --frames 30 --dt 0.1"
                          " --seed 11 --out \"" +
                          dir.string() + "\" > /dev/null 2>&1";
        int rc = std::system(cmd.c_str());
        return rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
    };
    bool ok = run(a) && run(b);
    if (!ok) {
        fs::remove_all(a);
        fs::remove_all(b);
        return fail("a run exited nonzero");
    }
    for (int i = 0; i < 30 && ok; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06d.obj", i);
        std::ifstream fa(a / name, std::ios::binary);
        std::ifstream fb(b / name, std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (!fa || !fb || sa.str().empty())
            ok = fail(std::string("missing or empty ") + name);
        else if (sa.str() != sb.str())
            ok = fail(std::string("byte mismatch in ") + name);
    }
    fs::remove_all(a);
    fs::remove_all(b);
    return ok;
}

// --- expression differential against shunting-yard, plus fuzz -------------

// Reference evaluator, written token-by-token against the documented grammar
// rather than sharing any code with the library parser.
namespace oracle {

struct Err {};

struct Tok {
    enum Kind { Num, Ident, Sym } kind;
    Real num = 0;
    std::string text;
};

std::vector<Tok> lex(const std::string& s) {
    std::vector<Tok> out;
    size_t i = 0;
    auto digits = [&] {
        size_t n = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i, ++n;
        return n;
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = i;
            bool int_part = digits() > 0;
            if (i < s.size() && s[i] == '.') {
                ++i;
                if (digits() == 0 && !int_part) throw Err{};
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                size_t mark = i++;
                if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
                if (digits() == 0) i = mark;
            }
            Real v = 0;
            auto [p, ec] = std::from_chars(s.data() + start, s.data() + i, v);
            if (ec != std::errc() || p != s.data() + i) throw Err{};
            out.push_back({Tok::Num, v, {}});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) ||
                    s[i] == '_'))
                ++i;
            out.push_back({Tok::Ident, 0, s.substr(start, i - start)});
            continue;
        }
        if (i + 1 < s.size()) {
            std::string two = s.substr(i, 2);
            if (two == "<=" || two == ">=" || two == "==" || two == "~=") {
                out.push_back({Tok::Sym, 0, two});
                i += 2;
                continue;
            }
        }
        if (std::string("+-*/^<>(),").find(c) != std::string::npos) {
            out.push_back({Tok::Sym, 0, std::string(1, c)});
            ++i;
            continue;
        }
        throw Err{};
    }
    return out;
}

struct OpInfo {
    int prec;
    bool right;
    int arity;
};

OpInfo op_info(const std::string& op) {
    if (op == "or") return {1, false, 2};
    if (op == "and") return {2, false, 2};
    if (op == "not") return {3, true, 1};
    if (op == "<" || op == "<=" || op == ">" || op == ">=" || op == "==" ||
        op == "~=")
        return {4, false, 2};
    if (op == "+" || op == "-") return {5, false, 2};
    if (op == "*" || op == "/") return {6, false, 2};
    if (op == "^") return {7, true, 2};
    if (op == "neg") return {8, true, 1};
    throw Err{};
}

struct RTok {
    enum Kind { Num, Var, Op, Call } kind;
    Real num = 0;
    std::string text;
    int argc = 0;
};

std::vector<RTok> to_rpn(const std::vector<Tok>& toks) {
    struct Ent {
        std::string op;   // empty for markers
        bool paren = false;
        bool func = false;
        std::string name;  // function name on a func paren marker
        int commas = 0;
    };
    std::vector<RTok> out;
    std::vector<Ent> st;
    bool expect_operand = true;

    auto pop_op = [&] {
        Ent e = st.back();
        st.pop_back();
        OpInfo info = op_info(e.op);
        out.push_back({RTok::Op, 0, e.op, info.arity});
    };

    for (size_t i = 0; i < toks.size(); ++i) {
        const Tok& t = toks[i];
        if (t.kind == Tok::Num) {
            if (!expect_operand) throw Err{};
            out.push_back({RTok::Num, t.num, {}, 0});
            expect_operand = false;
        } else if (t.kind == Tok::Ident) {
            const std::string& w = t.text;
            if (w == "not") {
                if (!expect_operand) throw Err{};
                st.push_back({"not", false, false, {}, 0});
            } else if (w == "and" || w == "or") {
                if (expect_operand) throw Err{};
                OpInfo in = op_info(w);
                while (!st.empty() && !st.back().paren) {
                    OpInfo top = op_info(st.back().op);
                    if (top.prec > in.prec || (top.prec == in.prec && !in.right))
                        pop_op();
                    else
                        break;
                }
                st.push_back({w, false, false, {}, 0});
                expect_operand = true;
            } else if (i + 1 < toks.size() && toks[i + 1].kind == Tok::Sym &&
                       toks[i + 1].text == "(") {
                if (!expect_operand) throw Err{};
                st.push_back({{}, true, true, w, 0});
                ++i;
            } else {
                if (!expect_operand) throw Err{};
                out.push_back({RTok::Var, 0, w, 0});
                expect_operand = false;
            }
        } else {
            const std::string& y = t.text;
            if (y == "(") {
                if (!expect_operand) throw Err{};
                st.push_back({{}, true, false, {}, 0});
            } else if (y == ")") {
                if (expect_operand) throw Err{};
                while (!st.empty() && !st.back().paren) pop_op();
                if (st.empty()) throw Err{};
                Ent marker = st.back();
                st.pop_back();
                if (marker.func)
                    out.push_back(
                        {RTok::Call, 0, marker.name, marker.commas + 1});
                expect_operand = false;
            } else if (y == ",") {
                if (expect_operand) throw Err{};
                while (!st.empty() && !st.back().paren) pop_op();
                if (st.empty() || !st.back().func) throw Err{};
                ++st.back().commas;
                expect_operand = true;
            } else if (y == "-" && expect_operand) {
                st.push_back({"neg", false, false, {}, 0});
            } else {
                if (expect_operand) throw Err{};
                OpInfo in = op_info(y);
                while (!st.empty() && !st.back().paren) {
                    OpInfo top = op_info(st.back().op);
                    if (top.prec > in.prec || (top.prec == in.prec && !in.right))
                        pop_op();
                    else
                        break;
                }
                st.push_back({y, false, false, {}, 0});
                expect_operand = true;
            }
        }
    }
    if (expect_operand) throw Err{};
    while (!st.empty()) {
        if (st.back().paren) throw Err{};
        pop_op();
    }
    return out;
}

Real apply_call(const std::string& name, const std::vector<Real>& args) {
    if (name == "sin" && args.size() == 1) return std::sin(args[0]);
    if (name == "cos" && args.size() == 1) return std::cos(args[0]);
    if (name == "abs" && args.size() == 1) return std::abs(args[0]);
    if (name == "min" && args.size() == 2) return std::min(args[0], args[1]);
    if (name == "max" && args.size() == 2) return std::max(args[0], args[1]);
    throw Err{};
}

Real run_rpn(const std::vector<RTok>& rpn,
             const EnvMap& env) {
    std::vector<Real> vs;
    auto pop = [&] {
        if (vs.empty()) throw Err{};
        Real v = vs.back();
        vs.pop_back();
        return v;
    };
    for (const RTok& r : rpn) {
        switch (r.kind) {
            case RTok::Num:
                vs.push_back(r.num);
                break;
            case RTok::Var: {
                auto it = env.find(r.text);
                if (it != env.end())
                    vs.push_back(it->second);
                else if (r.text == "pi")
                    vs.push_back(kPi);
                else
                    throw Err{};
                break;
            }
            case RTok::Call: {
                std::vector<Real> args(r.argc);
                for (int k = r.argc - 1; k >= 0; --k) args[k] = pop();
                vs.push_back(apply_call(r.text, args));
                break;
            }
            case RTok::Op: {
                if (r.text == "neg") {
                    vs.push_back(-pop());
                    break;
                }
                if (r.text == "not") {
                    vs.push_back(pop() != 0 ? 0 : 1);
                    break;
                }
                Real b = pop(), a = pop();
                if (r.text == "+") vs.push_back(a + b);
                else if (r.text == "-") vs.push_back(a - b);
                else if (r.text == "*") vs.push_back(a * b);
                else if (r.text == "/") {
                    if (b == 0) throw Err{};
                    vs.push_back(a / b);
                } else if (r.text == "^") vs.push_back(std::pow(a, b));
                else if (r.text == "<") vs.push_back(a < b ? 1 : 0);
                else if (r.text == "<=") vs.push_back(a <= b ? 1 : 0);
                else if (r.text == ">") vs.push_back(a > b ? 1 : 0);
                else if (r.text == ">=") vs.push_back(a >= b ? 1 : 0);
                else if (r.text == "==") vs.push_back(a == b ? 1 : 0);
                else if (r.text == "~=") vs.push_back(a != b ? 1 : 0);
                else if (r.text == "and")
                    vs.push_back(a != 0 && b != 0 ? 1 : 0);
                else if (r.text == "or")
                    vs.push_back(a != 0 || b != 0 ? 1 : 0);
                else
                    throw Err{};
                break;
            }
        }
    }
    if (vs.size() != 1) throw Err{};
    return vs[0];
}

std::optional<Real> eval(const std::string& src,
                         const EnvMap& env) {
    try {
        return run_rpn(to_rpn(lex(src)), env);
    } catch (const Err&) {
        return std::nullopt;
    }
}

}  // namespace oracle

// Random expression trees rendered with just enough parentheses to preserve
// their shape; the tree itself is the third, trivially-correct evaluator.
struct GNode {
    enum Kind { Num, Var, Unary, Binary, Call } kind;
    Real num = 0;
    std::string name;  // variable, function, or operator spelling
    std::vector<GNode> kids;
};

int gprec(const GNode& n) {
    switch (n.kind) {
        case GNode::Num:
        case GNode::Var:
        case GNode::Call:
            return 9;
        case GNode::Unary:
            return n.name == "-" ? 8 : 3;
        case GNode::Binary:
            if (n.name == "or") return 1;
            if (n.name == "and") return 2;
            if (n.name == "^") return 7;
            if (n.name == "*" || n.name == "/") return 6;
            if (n.name == "+" || n.name == "-") return 5;
            return 4;
    }
    return 9;
}

GNode gen_tree(std::mt19937& rng, int depth) {
    auto pick = [&](std::initializer_list<const char*> xs) {
        return *(xs.begin() + rng() % xs.size());
    };
    int roll = static_cast<int>(rng() % 100);
    if (depth <= 0 || roll < 25) {
        if (rng() % 2 == 0) {
            const char* nums[] = {"0",   "1",    "2",     "3",  "5",
                                 "7",   "10",   "0.5",   "1.5", "2.5",
                                 "0.25", "3.25", "0.125", "1e2", "2e-1",
                                 ".5",  "4."};
            GNode n{GNode::Num, 0, {}, {}};
            n.name = nums[rng() % (sizeof nums / sizeof nums[0])];
            n.num = std::strtod(n.name.c_str(), nullptr);
            return n;
        }
        GNode n{GNode::Var, 0, {}, {}};
        n.name = pick({"x", "y", "t", "pi"});
        return n;
    }
    if (roll < 70) {
        GNode n{GNode::Binary, 0, {}, {}};
        n.name = pick({"+", "-", "*", "/", "^", "<", "<=", ">", ">=", "==",
                       "~=", "and", "or"});
        n.kids.push_back(gen_tree(rng, depth - 1));
        n.kids.push_back(gen_tree(rng, depth - 1));
        return n;
    }
    if (roll < 85) {
        GNode n{GNode::Unary, 0, {}, {}};
        n.name = pick({"-", "not"});
        n.kids.push_back(gen_tree(rng, depth - 1));
        return n;
    }
    GNode n{GNode::Call, 0, {}, {}};
    n.name = pick({"sin", "cos", "abs", "min", "max"});
    int arity = (n.name == "min" || n.name == "max") ? 2 : 1;
    for (int i = 0; i < arity; ++i)
        n.kids.push_back(gen_tree(rng, depth - 1));
    return n;
}

std::string render(const GNode& n, int min_prec, std::mt19937& rng) {
    std::string core;
    switch (n.kind) {
        case GNode::Num:
        case GNode::Var:
            core = n.name;
            break;
        case GNode::Unary:
            if (n.name == "-")
                core = "-" + render(n.kids[0], 8, rng);
            else
                core = "not " + render(n.kids[0], 3, rng);
            break;
        case GNode::Binary: {
            int p = gprec(n);
            bool right = n.name == "^";
            core = render(n.kids[0], right ? p + 1 : p, rng) + " " + n.name +
                   " " + render(n.kids[1], right ? p : p + 1, rng);
            break;
        }
        case GNode::Call: {
            core = n.name + "(";
            for (size_t i = 0; i < n.kids.size(); ++i) {
                if (i) core += ", ";
                core += render(n.kids[i], 1, rng);
            }
            core += ")";
            break;
        }
    }
    bool wrap = gprec(n) < min_prec || rng() % 8 == 0;
    return wrap ? "(" + core + ")" : core;
}

std::optional<Real> eval_tree(const GNode& n,
                              const EnvMap& env) {
    auto val = [&](const GNode& k) {
        auto v = eval_tree(k, env);
        if (!v) throw oracle::Err{};
        return *v;
    };
    try {
        switch (n.kind) {
            case GNode::Num:
                return n.num;
            case GNode::Var: {
                auto it = env.find(n.name);
                if (it != env.end()) return it->second;
                if (n.name == "pi") return kPi;
                return std::nullopt;
            }
            case GNode::Unary: {
                Real v = val(n.kids[0]);
                return n.name == "-" ? -v : (v != 0 ? Real(0) : Real(1));
            }
            case GNode::Call: {
                std::vector<Real> args;
                for (const GNode& k : n.kids) args.push_back(val(k));
                return oracle::apply_call(n.name, args);
            }
            case GNode::Binary: {
                Real a = val(n.kids[0]);
                Real b = val(n.kids[1]);
                const std::string& o = n.name;
                if (o == "+") return a + b;
                if (o == "-") return a - b;
                if (o == "*") return a * b;
                if (o == "/") {
                    if (b == 0) return std::nullopt;
                    return a / b;
                }
                if (o == "^") return std::pow(a, b);
                if (o == "<") return a < b ? 1 : 0;
                if (o == "<=") return a <= b ? 1 : 0;
                if (o == ">") return a > b ? 1 : 0;
                if (o == ">=") return a >= b ? 1 : 0;
                if (o == "==") return a == b ? 1 : 0;
                if (o == "~=") return a != b ? 1 : 0;
                if (o == "and") return a != 0 && b != 0 ? 1 : 0;
                if (o == "or") return a != 0 || b != 0 ? 1 : 0;
                return std::nullopt;
            }
        }
    } catch (const oracle::Err&) {
        return std::nullopt;
    }
    return std::nullopt;
}

bool values_agree(const std::optional<Real>& a, const std::optional<Real>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    if (std::isnan(*a) && std::isnan(*b)) return true;
    return std::abs(*a - *b) <=
           1e-9 * std::max({Real(1), std::abs(*a), std::abs(*b)});
}

bool expression_differential() {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<Real> uv(-2.5, 2.5);
    std::vector<std::string> corpus;

    for (int iter = 0; iter < 200; ++iter) {
        GNode tree = gen_tree(rng, 5);
        std::string src = render(tree, 1, rng);
        corpus.push_back(src);
        EnvMap env{{"x", std::round(uv(rng) * 8) / 8},
                                        {"y", std::round(uv(rng) * 8) / 8},
                                        {"t", std::round(uv(rng) * 8) / 8}};

        std::optional<Real> lib;
        try {
            Expr e = parse_expr(src);
            Env le;
            le.vars = env;
            lib = eval_expr(e, le);
        } catch (const ParseError&) {
            return fail("library refused generated '" + src + "'");
        } catch (const EvalError&) {
            lib = std::nullopt;
        }

        std::optional<Real> ref = oracle::eval(src, env);
        std::optional<Real> direct = eval_tree(tree, env);
        if (!values_agree(lib, ref) || !values_agree(lib, direct))
            return fail("disagreement on '" + src + "'");
    }

    // Fuzz: random bytes and mutations of valid sources must only ever raise
    // the two documented error types.
    const std::string charset =
        "0123456789..+-*/^()<>=~, xytabcdefghinoprs_\t";
    Env fenv;
    fenv.vars = {{"x", 1.5}, {"y", -0.25}, {"t", 2}};
    for (int iter = 0; iter < 100000; ++iter) {
        std::string s;
        int mode = static_cast<int>(rng() % 3);
        if (mode == 0) {
            size_t len = rng() % 48;
            for (size_t i = 0; i < len; ++i)
                s += charset[rng() % charset.size()];
        } else if (mode == 1) {
            s = corpus[rng() % corpus.size()];
            int edits = 1 + static_cast<int>(rng() % 4);
            for (int e = 0; e < edits && !s.empty(); ++e) {
                size_t at = rng() % s.size();
                switch (rng() % 3) {
                    case 0:
                        s.insert(at, 1, charset[rng() % charset.size()]);
                        break;
                    case 1:
                        s.erase(at, 1);
                        break;
                    default:
                        s[at] = charset[rng() % charset.size()];
                        break;
                }
            }
        } else {
            switch (rng() % 5) {
                case 0: s = std::string(60, '(') + "1"; break;
                case 1: s = std::string(40, ')'); break;
                case 2: s = "1e999 + x"; break;
                case 3: s = std::string(80, '9') + ".5e-3"; break;
                default:
                    s = "min(";
                    for (int k = 0; k < 30; ++k) s += "min(";
                    s += "1,2";
                    break;
            }
        }
        try {
            Expr e = parse_expr(s);
            (void)eval_expr(e, fenv);
        } catch (const ParseError&) {
        } catch (const EvalError&) {
        }
    }
    return true;
}

struct TestCase {
    const char* name;
    const char* intent;
    double budget;  // seconds
    std::function<bool(void)> run;
};

}  // namespace

int main() {
    std::vector<TestCase> tests = {
        {"discrete derivation trace", "three rewrites match exactly", 0.1,
         discrete_trace},
        {"timed coral quiescence", "25 branches and 10 stalk segments", 5,
         coral_quiescence},
        {"primitive and surgery integrity",
         "audits stay clean through 100 random ops", 10,
         primitives_and_surgery},
        {"cell-tuple algebra", "120 tuples, involutive flips, one orbit", 1,
         cell_tuple_algebra},
        {"spike growth geometry", "displacement, shrink and planarity", 1,
         spike_geometry},
        {"implicit sphere surface", "on-surface vertices, watertight", 1,
         implicit_sphere},
        {"generalised cylinder sampling", "radii, counts and section morph", 1,
         cylinder_sampling},
        {"loop subdivision counts", "icosahedron refines 80/42 then 320", 1,
         subdivision_counts},
        {"deterministic scene replay", "same seed gives identical frames", 60,
         deterministic_replay},
        {"expression differential", "200 exprs vs reference, 100k fuzz", 30,
         expression_differential},
    };

    bool all_passed = true;
    for (const auto& test : tests) {
        auto t0 = Clock::now();
        bool passed = false;
        try {
            passed = test.run();
        } catch (const std::exception& e) {
            std::cerr << "       detail: unexpected exception: " << e.what()
                      << "\n";
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (passed && secs > test.budget) {
            std::cerr << "       detail: took " << secs << "s, budget "
                      << test.budget << "s\n";
            passed = false;
        }
        std::cout << (passed ? "[PASS] " : "[FAIL] ") << test.name << " - "
                  << test.intent << "\n";
        all_passed = all_passed && passed;
    }

    if (!all_passed) {
        std::cout << "acceptance suite FAILED\n";
        return 1;
    }
    std::cout << "acceptance suite passed (" << tests.size() << " cases)\n";
    return 0;
}
