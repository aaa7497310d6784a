#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "procgen/error.hpp"
#include "procgen/lsystem.hpp"
#include "procgen/mesh_io.hpp"
#include "procgen/noise.hpp"
#include "procgen/primitives.hpp"
#include "procgen/scene.hpp"
#include "procgen/spike.hpp"
#include "procgen/turtle.hpp"

namespace procgen {

namespace {

// ---- shared helpers -------------------------------------------------------

// Terminal ages per symbol, harvested from the grammar's timed productions.
std::map<std::string, Real, std::less<>> terminal_ages(const LSystem& ls) {
    std::map<std::string, Real, std::less<>> out;
    for (const Production& p : ls.productions())
        if (p.terminal_age && !out.count(p.pred)) out[p.pred] = *p.terminal_age;
    return out;
}

GrowthFn growth_from(const std::map<std::string, Real, std::less<>>& terminals) {
    return [terminals](const Module& m) {
        auto it = terminals.find(m.symbol);
        return it == terminals.end() ? Real(1) : growth_factor(m, it->second);
    };
}

// Nearest alive vertex to each direction on the unit sphere, deduplicated.
std::vector<VertexHandle> spread_sites(const Mesh& m, int count) {
    std::vector<VertexHandle> out;
    std::set<int> used;
    for (const Vec3& dir : distribute_points_sphere(count)) {
        VertexHandle best;
        Real best_d = 1e30;
        for (VertexHandle v : m.vertexlist()) {
            Real d = norm2(m.position(v) - dir);
            if (d < best_d) {
                best_d = d;
                best = v;
            }
        }
        if (best.idx >= 0 && used.insert(best.idx).second) out.push_back(best);
    }
    return out;
}

// Vertices scored by 3D noise at their position, best first. Boundary
// vertices are excluded since growers cannot start there.
std::vector<VertexHandle> noisy_sites(const Mesh& m, int count, Real freq,
                                      Real min_height, int height_axis) {
    std::vector<std::pair<Real, VertexHandle>> scored;
    for (VertexHandle v : m.vertexlist()) {
        if (m.is_boundary(v)) continue;
        const Vec3& p = m.position(v);
        Real h = height_axis == 2 ? p.z : p.y;
        if (h < min_height) continue;
        scored.push_back({noise(p.x * freq, p.y * freq, p.z * freq), v});
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second.idx < b.second.idx;
    });
    if (int(scored.size()) > count) scored.resize(std::size_t(count));
    std::vector<VertexHandle> out;
    for (const auto& [s, v] : scored) out.push_back(v);
    return out;
}

// ---- listing1: sine-perturbed sphere --------------------------------------

class Listing1Scene : public Scene {
public:
    void setup(Universe& u, const Params& p) override {
        node_ = &u.add(create_sphere(int(p.integer("level"))));
        node_->mesh->sync();
    }
    void update(Universe& u, const Params& p, Real) override {
        Mesh& m = *node_->mesh;
        Real amp = p.real("amp");
        for (VertexHandle v : m.vertexlist()) {
            Vec3 q = m.position(v);
            q.y += amp * std::sin(q.x + u.t);
            m.set_position(v, q);
        }
    }

private:
    Node* node_ = nullptr;
};

// ---- spikes: tapered extrusions, longer towards the pole ------------------

class SpikesScene : public Scene {
public:
    void setup(Universe& u, const Params& p) override {
        node_ = &u.add(create_sphere(int(p.integer("level"))));
        Mesh& m = *node_->mesh;
        m.sync();
        auto sites = spread_sites(m, int(p.integer("count")));
        growers_.reserve(sites.size());
        for (VertexHandle v : sites) {
            Real h = (m.position(v).y + 1) / 2;  // 0 at south pole, 1 at north
            SpikeConfig c;
            c.speed = p.real("speed");
            c.seg_length = p.real("seg_length");
            c.shrink = p.real("shrink");
            c.num_segs = std::max(1, int(std::lround(lerp(2.0, Real(p.integer("max_segs")), h))));
            growers_.push_back(spike_new(m, v, c));
        }
    }
    void update(Universe&, const Params&, Real dt) override {
        for (SpikeGrower& g : growers_) g.update(dt);
    }

private:
    Node* node_ = nullptr;
    std::vector<SpikeGrower> growers_;
};

// ---- suckers: grow out, then curl inward, stop near a neighbour -----------

class SuckersScene : public Scene {
public:
    void setup(Universe& u, const Params& p) override {
        node_ = &u.add(create_sphere(int(p.integer("level"))));
        Mesh& m = *node_->mesh;
        m.sync();
        int flip_at = int(p.integer("flip_seg"));
        for (VertexHandle v : spread_sites(m, int(p.integer("count")))) {
            SpikeConfig c;
            c.speed = p.real("speed");
            c.seg_length = p.real("seg_length");
            c.shrink = p.real("shrink");
            c.num_segs = int(p.integer("segs"));
            c.circularise = true;
            c.per_segment = [flip_at](int seg, SpikeConfig& cc) {
                if (seg == flip_at) cc.speed = -cc.speed;
            };
            growers_.push_back(spike_new(m, v, c));
        }
    }
    void update(Universe&, const Params& p, Real dt) override {
        Real r_stop = p.real("r_stop");
        const Mesh& m = *node_->mesh;
        for (std::size_t i = 0; i < growers_.size(); ++i) {
            SpikeGrower& g = growers_[i];
            if (g.state() == SpikeState::Done) continue;
            if (touches_neighbour(m, i, r_stop))
                g.finish();
            else
                g.update(dt);
        }
    }

private:
    bool touches_neighbour(const Mesh& m, std::size_t i, Real r_stop) const {
        if (!m.valid(growers_[i].tip())) return false;
        Vec3 tip = m.position(growers_[i].tip());
        for (std::size_t j = 0; j < growers_.size(); ++j) {
            if (j == i) continue;
            for (const auto& ring : growers_[j].rings())
                for (VertexHandle v : ring)
                    if (m.valid(v) && distance(m.position(v), tip) < r_stop) return true;
        }
        return false;
    }

    Node* node_ = nullptr;
    std::vector<SpikeGrower> growers_;
};

// ---- bunny-stalks: growers sprouting from a user mesh ---------------------

class BunnyStalksScene : public Scene {
public:
    void setup(Universe& u, const Params& p) override {
        const std::string& path = p.text("obj");
        Mesh m = path.empty() ? create_sphere(3) : load_obj(path);
        node_ = &u.add(std::move(m));
        Mesh& host = *node_->mesh;
        host.sync();
        for (VertexHandle v : noisy_sites(host, int(p.integer("count")), p.real("noise_freq"),
                                          -1e30, 1)) {
            SpikeConfig c;
            c.speed = p.real("speed");
            c.seg_length = p.real("seg_length");
            c.shrink = p.real("shrink");
            c.num_segs = int(p.integer("segs"));
            try {
                growers_.push_back(spike_new(host, v, c));
            } catch (const UnsupportedInputError&) {
                // irregular spots on user meshes are skipped, not fatal
            }
        }
    }
    void update(Universe&, const Params&, Real dt) override {
        for (SpikeGrower& g : growers_) g.update(dt);
    }

private:
    Node* node_ = nullptr;
    std::vector<SpikeGrower> growers_;
};

// ---- calcispongiae: the timed branching-coral grammar ---------------------

const char* kCalcispongiae = R"(# Branching coral driven by a timed grammar.
# The stalk extends segment by segment; side shoots spiral out at the golden
# angle and finish in a four-part bulb.
axiom: ^(-0.5*pi) G#(1) (Gsc(3),0) Gs G#(0) (f(6),0) (A(2,1,10,0.02),0) Ge
rule: (A(l,w,n,b),1) : n > 0 -> (S(l,b,w),0) (A(l,w,n-1,b),0)
rule: (A(l,w,n,b),1) : n == 0 -> (B(2,0.7,25,0.09),0)
rule: (B(l,w,n,b),1) : n > 0 -> [ \(2.39996*n) (Gsc(w),0) Gs (f(l),0) (C(l,w,10,b),0) Ge ] (S(1,1,1),0) (B(l,w,n-1,0.9*b),0)
rule: (C(l,w,n,b),1) : n > 0 -> (S(l,b,w),0) (C(l,w,n-1,b),0)
rule: (C(l,w,n,b),1) : n == 0 -> (S(1.5*l,0,1.1*l),0) (S(1.5*l,0,l),0) (S(l,0,0.3*l),0) (S(0.5*l,0,0.6*l),0)
rule: (S(l,b,w),30) -> S(l,b,w)
rule: (Gsc(x),10) -> Gsc(x)
rule: (f(x),15) -> f(x)
)";

class CalcispongiaeScene : public Scene {
public:
    void setup(Universe&, const Params& p) override {
        ls_ = parse_lsystem_source(kCalcispongiae);
        growth_ = growth_from(terminal_ages(*ls_));
        map_ = default_interpretation_map();
        for (const char* sym : {"A", "B", "C"}) map_.ignore(sym);
        around_ = int(p.integer("around"));
        along_ = int(p.integer("along"));
    }
    void update(Universe& u, const Params&, Real dt) override {
        ls_->derive_timed(dt);
        rebuild(u, interpret(ls_->current(), map_, growth_, around_, along_));
    }

private:
    void rebuild(Universe& u, std::vector<Mesh> meshes) {
        while (nodes_.size() < meshes.size()) nodes_.push_back(&u.add(Mesh{}));
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            nodes_[i]->mesh = i < meshes.size() ? std::move(meshes[i]) : Mesh{};
    }

    std::optional<LSystem> ls_;
    GrowthFn growth_;
    InterpretationMap map_;
    std::vector<Node*> nodes_;
    int around_ = 16, along_ = 8;
};

// ---- hybrid: L-system trunk studded with growers --------------------------

class HybridScene : public Scene {
public:
    void setup(Universe& u, const Params& p) override {
        LSystem ls = new_lsystem("^(-0.5*pi) Gsc(0.6) Gs f(0.5) A(6) Ge",
                                 {"A(n) : n > 0 -> S(1,0.12,0.1*n) A(n-1)",
                                  "A(n) : n == 0 -> "});
        for (int i = 0; i < 10; ++i) {
            auto before = ls.current();
            ls.derive();
            if (ls.current() == before) break;
        }
        InterpretationMap map = default_interpretation_map();
        map.ignore("A");
        auto meshes = interpret(ls.current(), map);
        node_ = &u.add(std::move(meshes.at(0)));
        Mesh& trunk = *node_->mesh;
        trunk.sync();

        // Growth sites by height and noise score; the trunk stands along +Z.
        for (VertexHandle v : noisy_sites(trunk, int(p.integer("count")),
                                          p.real("noise_freq"), p.real("min_height"), 2)) {
            SpikeConfig c;
            c.speed = p.real("speed");
            c.seg_length = p.real("seg_length");
            c.shrink = p.real("shrink");
            c.num_segs = int(p.integer("segs"));
            try {
                growers_.push_back(spike_new(trunk, v, c));
            } catch (const UnsupportedInputError&) {
            }
        }
    }
    void update(Universe&, const Params&, Real dt) override {
        for (SpikeGrower& g : growers_) g.update(dt);
    }

private:
    Node* node_ = nullptr;
    std::vector<SpikeGrower> growers_;
};

template <class S>
std::function<std::unique_ptr<Scene>()> make() {
    return [] { return std::unique_ptr<Scene>(new S()); };
}

std::vector<SceneInfo> build_registry() {
    std::vector<SceneInfo> reg;
    reg.push_back({"listing1",
                   "sphere with a travelling sine ripple",
                   {{"level", 2L, "icosphere subdivision level"},
                    {"amp", Real(0.01), "per-update ripple amplitude"}},
                   make<Listing1Scene>()});
    reg.push_back({"spikes",
                   "sphere sprouting tapered spikes, longer towards the top",
                   {{"level", 3L, "icosphere subdivision level"},
                    {"count", 24L, "number of spikes"},
                    {"speed", Real(0.8), "growth speed"},
                    {"seg_length", Real(0.08), "segment length"},
                    {"shrink", Real(0.8), "per-segment radius ratio"},
                    {"max_segs", 8L, "segment count at the north pole"}},
                   make<SpikesScene>()});
    reg.push_back({"suckers",
                   "stubby growths that flip inward and stop near a neighbour",
                   {{"level", 3L, "icosphere subdivision level"},
                    {"count", 16L, "number of suckers"},
                    {"speed", Real(0.5), "growth speed"},
                    {"seg_length", Real(0.06), "segment length"},
                    {"shrink", Real(0.9), "per-segment radius ratio"},
                    {"segs", 6L, "segments per sucker"},
                    {"flip_seg", 4L, "segment at which growth turns inward"},
                    {"r_stop", Real(0.12), "stop distance to a neighbour's rings"}},
                   make<SuckersScene>()});
    reg.push_back({"bunny-stalks",
                   "stalks grown from a user-supplied OBJ (icosphere fallback)",
                   {{"obj", std::string(), "path to the host OBJ mesh"},
                    {"count", 12L, "number of stalks"},
                    {"noise_freq", Real(2.0), "site-selection noise frequency"},
                    {"speed", Real(0.6), "growth speed"},
                    {"seg_length", Real(0.07), "segment length"},
                    {"shrink", Real(0.85), "per-segment radius ratio"},
                    {"segs", 5L, "segments per stalk"}},
                   make<BunnyStalksScene>()});
    reg.push_back({"calcispongiae",
                   "timed branching coral: spiralling shoots ending in bulbs",
                   {{"around", 16L, "cylinder samples around"},
                    {"along", 8L, "cylinder samples per carrier segment"}},
                   make<CalcispongiaeScene>()});
    reg.push_back({"hybrid",
                   "L-system trunk with spike growers at noisy high sites",
                   {{"count", 10L, "number of growers"},
                    {"noise_freq", Real(2.0), "site-selection noise frequency"},
                    {"min_height", Real(1.0), "minimum trunk height for sites"},
                    {"speed", Real(0.5), "growth speed"},
                    {"seg_length", Real(0.06), "segment length"},
                    {"shrink", Real(0.75), "per-segment radius ratio"},
                    {"segs", 4L, "segments per spike"}},
                   make<HybridScene>()});
    return reg;
}

}  // namespace

const std::vector<SceneInfo>& scene_registry() {
    static const std::vector<SceneInfo> reg = build_registry();
    return reg;
}

const char* calcispongiae_source() { return kCalcispongiae; }

}  // namespace procgen
