#pragma once

#include <array>
#include <compare>
#include <vector>

#include "procgen/error.hpp"
#include "procgen/geom.hpp"

namespace procgen {

// Slot index + generation counter. Slots are reused after deletion with a
// bumped generation, so a stale handle can always be detected.
struct VertexHandle {
    int idx = -1, gen = -1;
    bool operator==(const VertexHandle&) const = default;
    auto operator<=>(const VertexHandle&) const = default;
};

struct FaceHandle {
    int idx = -1, gen = -1;
    bool operator==(const FaceHandle&) const = default;
    auto operator<=>(const FaceHandle&) const = default;
};

// Cell tuple <vertex, edge-at-vertex, face>. e selects one of the two face
// edges incident to v: 0 is the edge leaving v in winding order, 1 the edge
// arriving at v.
struct Pos {
    VertexHandle v;
    int e = 0;
    FaceHandle f;
    bool operator==(const Pos&) const = default;
};

enum class FlipAxis { V, E, F };

class Mesh {
public:
    VertexHandle add_vertex(const Vec3& p);
    FaceHandle add_face(VertexHandle a, VertexHandle b, VertexHandle c);
    void destroy_face(FaceHandle f);
    // Only vertices with no remaining alive faces can be destroyed.
    void destroy_vertex(VertexHandle v);

    bool valid(VertexHandle h) const;
    bool valid(FaceHandle h) const;

    int vertex_count() const { return alive_vs_; }
    int face_count() const { return alive_fs_; }
    long edge_count() const;  // undirected, derived on demand

    const Vec3& position(VertexHandle h) const;
    void set_position(VertexHandle h, const Vec3& p);
    const Vec3& normal(VertexHandle h) const;
    void set_normal(VertexHandle h, const Vec3& n);
    const RGBA& colour(VertexHandle h) const;
    void set_colour(VertexHandle h, const RGBA& c);
    const Vec3& face_normal(FaceHandle h) const;
    std::array<VertexHandle, 3> face_vertices(FaceHandle h) const;

    std::vector<VertexHandle> vertexlist() const;
    std::vector<FaceHandle> facelist() const;

    // One-ring in consistent winding order; cyclic for interior vertices,
    // open fan from one boundary edge to the other for boundary vertices.
    std::vector<VertexHandle> loopv(VertexHandle v) const;
    // Faces around v, aligned with loopv: face i spans (v, ring[i], ring[i+1]).
    std::vector<FaceHandle> face_star(VertexHandle v) const;
    bool is_boundary(VertexHandle v) const;
    // BFS ball of edge-distance <= n, including v, in discovery order.
    std::vector<VertexHandle> nearbyv(VertexHandle v, int n) const;

    Pos make_pos(FaceHandle f) const;

    bool dirty() const { return dirty_; }
    void mark_dirty() { dirty_ = true; }
    void sync();         // face + vertex normals; obeys the parallel switch
    void sync_serial();  // plain reference path; bitwise-identical result

    struct Audit {
        long v = 0, f = 0, e = 0;
        long boundary_edges = 0;
        bool manifold = true;  // every edge on 1 or 2 faces, windings consistent
        bool closed = true;
        long euler() const { return v - e + f; }
    };
    Audit audit() const;

    // Internals shared with the kernel's own algorithms.
    struct VSlot {
        Vec3 p, n;
        RGBA c;
        int gen = 0;
        bool alive = false;
    };
    struct FSlot {
        int v[3] = {-1, -1, -1};
        Vec3 n;
        int gen = 0;
        bool alive = false;
    };
    const std::vector<VSlot>& vertex_slots() const { return vs_; }
    const std::vector<FSlot>& face_slots() const { return fs_; }

private:
    friend Pos pos_flip(const Mesh&, const Pos&, FlipAxis);

    std::vector<VSlot> vs_;
    std::vector<FSlot> fs_;
    std::vector<int> free_vs_, free_fs_;
    int alive_vs_ = 0, alive_fs_ = 0;
    bool dirty_ = false;

    // Derived navigation data, rebuilt lazily after topology changes.
    mutable std::vector<std::array<int, 3>> adj_;   // face across edge i of face
    mutable std::vector<int> vface_;                // one alive face per vertex
    mutable bool nav_valid_ = false;

    void ensure_nav() const;
    void invalidate_nav() { nav_valid_ = false; }
    int check(VertexHandle h) const;
    int check(FaceHandle h) const;
    int corner_of(int face, int vert) const;
    void star_walk(VertexHandle v, std::vector<VertexHandle>* ring,
                   std::vector<FaceHandle>* faces, bool* boundary) const;
    void sync_impl(bool par);
};

// Exactly one tuple element changes per flip. F-flip across a boundary edge
// throws BoundaryError.
Pos pos_flip(const Mesh& m, const Pos& p, FlipAxis axis);

}  // namespace procgen
