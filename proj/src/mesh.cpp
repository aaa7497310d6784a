#include "procgen/mesh.hpp"

#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "procgen/parallel.hpp"

namespace procgen {
namespace {

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::uint64_t dir_key(int a, int b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

int Mesh::check(VertexHandle h) const {
    if (h.idx < 0 || h.idx >= static_cast<int>(vs_.size()) || !vs_[h.idx].alive ||
        vs_[h.idx].gen != h.gen)
        throw StaleHandleError("stale or invalid vertex handle");
    return h.idx;
}

int Mesh::check(FaceHandle h) const {
    if (h.idx < 0 || h.idx >= static_cast<int>(fs_.size()) || !fs_[h.idx].alive ||
        fs_[h.idx].gen != h.gen)
        throw StaleHandleError("stale or invalid face handle");
    return h.idx;
}

bool Mesh::valid(VertexHandle h) const {
    return h.idx >= 0 && h.idx < static_cast<int>(vs_.size()) && vs_[h.idx].alive &&
           vs_[h.idx].gen == h.gen;
}

bool Mesh::valid(FaceHandle h) const {
    return h.idx >= 0 && h.idx < static_cast<int>(fs_.size()) && fs_[h.idx].alive &&
           fs_[h.idx].gen == h.gen;
}

VertexHandle Mesh::add_vertex(const Vec3& p) {
    int i;
    if (!free_vs_.empty()) {
        i = free_vs_.back();
        free_vs_.pop_back();
    } else {
        i = static_cast<int>(vs_.size());
        vs_.emplace_back();
    }
    VSlot& s = vs_[i];
    s.p = p;
    s.n = {0, 0, 0};
    s.c = {};
    s.alive = true;
    ++alive_vs_;
    dirty_ = true;
    invalidate_nav();
    return {i, s.gen};
}

FaceHandle Mesh::add_face(VertexHandle a, VertexHandle b, VertexHandle c) {
    int ia = check(a), ib = check(b), ic = check(c);
    if (ia == ib || ib == ic || ia == ic)
        throw std::invalid_argument("add_face: vertices must be distinct");
    int i;
    if (!free_fs_.empty()) {
        i = free_fs_.back();
        free_fs_.pop_back();
    } else {
        i = static_cast<int>(fs_.size());
        fs_.emplace_back();
    }
    FSlot& s = fs_[i];
    s.v[0] = ia;
    s.v[1] = ib;
    s.v[2] = ic;
    s.n = {0, 0, 0};
    s.alive = true;
    ++alive_fs_;
    dirty_ = true;
    invalidate_nav();
    return {i, s.gen};
}

void Mesh::destroy_face(FaceHandle f) {
    int i = check(f);
    fs_[i].alive = false;
    ++fs_[i].gen;
    free_fs_.push_back(i);
    --alive_fs_;
    dirty_ = true;
    invalidate_nav();
}

void Mesh::destroy_vertex(VertexHandle v) {
    int i = check(v);
    for (const FSlot& f : fs_)
        if (f.alive && (f.v[0] == i || f.v[1] == i || f.v[2] == i))
            throw std::invalid_argument("destroy_vertex: vertex still has alive faces");
    vs_[i].alive = false;
    ++vs_[i].gen;
    free_vs_.push_back(i);
    --alive_vs_;
    dirty_ = true;
    invalidate_nav();
}

const Vec3& Mesh::position(VertexHandle h) const { return vs_[check(h)].p; }

void Mesh::set_position(VertexHandle h, const Vec3& p) {
    vs_[check(h)].p = p;
    dirty_ = true;
}

const Vec3& Mesh::normal(VertexHandle h) const { return vs_[check(h)].n; }

void Mesh::set_normal(VertexHandle h, const Vec3& n) { vs_[check(h)].n = n; }

const RGBA& Mesh::colour(VertexHandle h) const { return vs_[check(h)].c; }

void Mesh::set_colour(VertexHandle h, const RGBA& c) { vs_[check(h)].c = c; }

const Vec3& Mesh::face_normal(FaceHandle h) const { return fs_[check(h)].n; }

std::array<VertexHandle, 3> Mesh::face_vertices(FaceHandle h) const {
    const FSlot& f = fs_[check(h)];
    return {VertexHandle{f.v[0], vs_[f.v[0]].gen}, VertexHandle{f.v[1], vs_[f.v[1]].gen},
            VertexHandle{f.v[2], vs_[f.v[2]].gen}};
}

std::vector<VertexHandle> Mesh::vertexlist() const {
    std::vector<VertexHandle> out;
    out.reserve(alive_vs_);
    for (int i = 0; i < static_cast<int>(vs_.size()); ++i)
        if (vs_[i].alive) out.push_back({i, vs_[i].gen});
    return out;
}

std::vector<FaceHandle> Mesh::facelist() const {
    std::vector<FaceHandle> out;
    out.reserve(alive_fs_);
    for (int i = 0; i < static_cast<int>(fs_.size()); ++i)
        if (fs_[i].alive) out.push_back({i, fs_[i].gen});
    return out;
}

long Mesh::edge_count() const {
    std::unordered_set<std::uint64_t> edges;
    for (const FSlot& f : fs_) {
        if (!f.alive) continue;
        edges.insert(edge_key(f.v[0], f.v[1]));
        edges.insert(edge_key(f.v[1], f.v[2]));
        edges.insert(edge_key(f.v[2], f.v[0]));
    }
    return static_cast<long>(edges.size());
}

void Mesh::ensure_nav() const {
    if (nav_valid_) return;
    adj_.assign(fs_.size(), {-1, -1, -1});
    vface_.assign(vs_.size(), -1);
    std::unordered_map<std::uint64_t, std::pair<int, int>> by_edge;  // directed (a,b) -> (face, slot)
    by_edge.reserve(fs_.size() * 3);
    for (int fi = 0; fi < static_cast<int>(fs_.size()); ++fi) {
        const FSlot& f = fs_[fi];
        if (!f.alive) continue;
        for (int e = 0; e < 3; ++e) {
            int a = f.v[e], b = f.v[(e + 1) % 3];
            by_edge[dir_key(a, b)] = {fi, e};
            vface_[a] = fi;
        }
    }
    for (int fi = 0; fi < static_cast<int>(fs_.size()); ++fi) {
        const FSlot& f = fs_[fi];
        if (!f.alive) continue;
        for (int e = 0; e < 3; ++e) {
            int a = f.v[e], b = f.v[(e + 1) % 3];
            auto it = by_edge.find(dir_key(b, a));
            if (it != by_edge.end()) adj_[fi][e] = it->second.first;
        }
    }
    nav_valid_ = true;
}

int Mesh::corner_of(int face, int vert) const {
    const FSlot& f = fs_[face];
    for (int c = 0; c < 3; ++c)
        if (f.v[c] == vert) return c;
    return -1;
}

// Walks the fan of faces around v. Starting from an arbitrary incident face
// it first rewinds to a boundary edge (if any), then sweeps across the fan.
void Mesh::star_walk(VertexHandle v, std::vector<VertexHandle>* ring,
                     std::vector<FaceHandle>* faces, bool* boundary) const {
    int vi = check(v);
    ensure_nav();
    int f0 = vface_[vi];
    if (f0 < 0) {  // isolated vertex
        if (boundary) *boundary = false;
        return;
    }
    // Rewind: cross the edge arriving at v until hitting a boundary or a lap.
    // Step limits keep garbage adjacency (non-manifold input) from spinning.
    int start = f0;
    for (int steps = 0; steps <= alive_fs_; ++steps) {
        int c = corner_of(start, vi);
        int g = adj_[start][(c + 2) % 3];  // across edge (prev -> v)
        if (g < 0 || g == f0) break;
        start = g;
    }
    bool open = false;
    int fcur = start;
    std::vector<int> ring_idx;
    std::vector<int> face_idx;
    for (int steps = 0; steps <= alive_fs_; ++steps) {
        int c = corner_of(fcur, vi);
        ring_idx.push_back(fs_[fcur].v[(c + 2) % 3]);  // prev corner enters the ring first
        face_idx.push_back(fcur);
        int g = adj_[fcur][c];  // across edge (v -> next)
        if (g < 0) {
            open = true;
            ring_idx.push_back(fs_[fcur].v[(c + 1) % 3]);
            break;
        }
        if (g == start) break;  // closed the loop
        fcur = g;
    }
    if (boundary) *boundary = open;
    if (ring) {
        ring->clear();
        ring->reserve(ring_idx.size());
        for (int i : ring_idx) ring->push_back({i, vs_[i].gen});
    }
    if (faces) {
        faces->clear();
        faces->reserve(face_idx.size());
        for (int i : face_idx) faces->push_back({i, fs_[i].gen});
    }
}

std::vector<VertexHandle> Mesh::loopv(VertexHandle v) const {
    std::vector<VertexHandle> ring;
    star_walk(v, &ring, nullptr, nullptr);
    return ring;
}

std::vector<FaceHandle> Mesh::face_star(VertexHandle v) const {
    std::vector<FaceHandle> faces;
    star_walk(v, nullptr, &faces, nullptr);
    return faces;
}

bool Mesh::is_boundary(VertexHandle v) const {
    bool b = false;
    star_walk(v, nullptr, nullptr, &b);
    return b;
}

std::vector<VertexHandle> Mesh::nearbyv(VertexHandle v, int n) const {
    check(v);
    if (n < 0) throw std::invalid_argument("nearbyv: n must be >= 0");
    std::vector<VertexHandle> out{v};
    std::unordered_set<int> seen{v.idx};
    size_t level_start = 0;
    for (int depth = 0; depth < n; ++depth) {
        size_t level_end = out.size();
        for (size_t i = level_start; i < level_end; ++i)
            for (VertexHandle u : loopv(out[i]))
                if (seen.insert(u.idx).second) out.push_back(u);
        level_start = level_end;
        if (level_start == out.size()) break;
    }
    return out;
}

Pos Mesh::make_pos(FaceHandle f) const {
    const FSlot& s = fs_[check(f)];
    return {{s.v[0], vs_[s.v[0]].gen}, 0, f};
}

Pos pos_flip(const Mesh& m, const Pos& p, FlipAxis axis) {
    int vi = m.check(p.v);
    int fi = m.check(p.f);
    if (p.e != 0 && p.e != 1) throw std::invalid_argument("pos_flip: e must be 0 or 1");
    int c = m.corner_of(fi, vi);
    if (c < 0) throw std::invalid_argument("pos_flip: vertex is not a corner of the face");
    const Mesh::FSlot& f = m.fs_[fi];
    switch (axis) {
        case FlipAxis::E:
            return {p.v, p.e ^ 1, p.f};
        case FlipAxis::V: {
            // Other endpoint of the same physical edge; the edge flag swaps
            // because the edge leaves one endpoint and arrives at the other.
            int other = p.e == 0 ? f.v[(c + 1) % 3] : f.v[(c + 2) % 3];
            return {{other, m.vs_[other].gen}, p.e ^ 1, p.f};
        }
        case FlipAxis::F: {
            m.ensure_nav();
            int edge = p.e == 0 ? c : (c + 2) % 3;
            int g = m.adj_[fi][edge];
            if (g < 0) throw BoundaryError("pos_flip: no face across a boundary edge");
            int other = f.v[p.e == 0 ? (c + 1) % 3 : (c + 2) % 3];
            int cg = m.corner_of(g, vi);
            const Mesh::FSlot& gf = m.fs_[g];
            int ne = gf.v[(cg + 1) % 3] == other ? 0 : 1;
            return {p.v, ne, {g, gf.gen}};
        }
    }
    throw std::invalid_argument("pos_flip: bad axis");
}

void Mesh::sync_impl(bool par) {
    const int nf = static_cast<int>(fs_.size());
    const int nv = static_cast<int>(vs_.size());
    // Raw (area-scaled) cross products; shared by both normal passes.
    std::vector<Vec3> raw(nf, Vec3{0, 0, 0});
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < nf; ++i) {
        FSlot& f = fs_[i];
        if (!f.alive) continue;
        Vec3 cr = cross(vs_[f.v[1]].p - vs_[f.v[0]].p, vs_[f.v[2]].p - vs_[f.v[0]].p);
        raw[i] = cr;
        Real n = norm(cr);
        f.n = n > 0 ? cr / n : Vec3{0, 0, 0};
    }
    // Incidence lists in ascending face order give one fixed summation order
    // per vertex regardless of thread count.
    std::vector<int> head(nv + 1, 0);
    for (int i = 0; i < nf; ++i)
        if (fs_[i].alive)
            for (int k = 0; k < 3; ++k) ++head[fs_[i].v[k] + 1];
    for (int v = 0; v < nv; ++v) head[v + 1] += head[v];
    std::vector<int> incident(head[nv]);
    {
        std::vector<int> cursor(head.begin(), head.end() - 1);
        for (int i = 0; i < nf; ++i)
            if (fs_[i].alive)
                for (int k = 0; k < 3; ++k) incident[cursor[fs_[i].v[k]]++] = i;
    }
#pragma omp parallel for schedule(static) if (par)
    for (int v = 0; v < nv; ++v) {
        if (!vs_[v].alive) continue;
        Vec3 acc{0, 0, 0};
        for (int k = head[v]; k < head[v + 1]; ++k) {
            const Vec3& r = raw[incident[k]];
            if (norm2(r) > 0) acc += r;  // degenerate faces contribute nothing
        }
        Real n = norm(acc);
        vs_[v].n = n > 0 ? acc / n : Vec3{0, 0, 0};
    }
    dirty_ = false;
}

void Mesh::sync() { sync_impl(parallel_enabled()); }

void Mesh::sync_serial() { sync_impl(false); }

Mesh::Audit Mesh::audit() const {
    Audit a;
    a.v = alive_vs_;
    a.f = alive_fs_;
    std::unordered_map<std::uint64_t, int> count;
    std::unordered_set<std::uint64_t> directed;
    for (const FSlot& f : fs_) {
        if (!f.alive) continue;
        for (int e = 0; e < 3; ++e) {
            int x = f.v[e], y = f.v[(e + 1) % 3];
            ++count[edge_key(x, y)];
            if (!directed.insert(dir_key(x, y)).second) a.manifold = false;  // repeated winding
        }
    }
    a.e = static_cast<long>(count.size());
    for (const auto& [k, c] : count) {
        if (c == 1) {
            ++a.boundary_edges;
            a.closed = false;
        } else if (c > 2) {
            a.manifold = false;
        }
    }
    return a;
}

}  // namespace procgen
