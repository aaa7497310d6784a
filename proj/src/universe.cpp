#include "procgen/universe.hpp"

#include <cstdio>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "procgen/error.hpp"
#include "procgen/mesh_io.hpp"
#include "procgen/subdivide.hpp"

namespace procgen {

Node& Universe::add() {
    nodes_.push_back(std::make_unique<Node>());
    nodes_.back()->id = next_id_++;
    return *nodes_.back();
}

Node& Universe::add(Mesh m) {
    Node& n = add();
    n.mesh = std::move(m);
    return n;
}

bool Universe::owns(const Node& n) const {
    for (const auto& p : nodes_)
        if (p.get() == &n) return true;
    return false;
}

void Universe::make_child_of(Node& parent, Node& child) {
    if (!owns(parent) || !owns(child))
        throw std::invalid_argument("make_child_of: node does not belong to this universe");
    for (const Node* a = &parent; a; a = a->parent)
        if (a == &child)
            throw HierarchyError("make_child_of: node " + std::to_string(child.id) +
                                 " would become its own ancestor");
    child.parent = &parent;
}

Mat4 Universe::world_transform(const Node& n) const {
    Mat4 w = n.local;
    for (const Node* a = n.parent; a; a = a->parent) w = a->local * w;
    return w;
}

void Universe::sync_dirty() {
    for (auto& p : nodes_)
        if (p->mesh && p->mesh->dirty()) p->mesh->sync();
}

void export_frame(const Universe& u, const std::string& path, const std::string& format,
                  int subdivide) {
    if (format != "obj" && format != "ply")
        throw std::invalid_argument("export_frame: unknown format '" + format + "'");
    if (subdivide < 0) throw std::invalid_argument("export_frame: subdivide must be >= 0");

    Mesh baked;
    for (const auto& p : u.nodes()) {
        if (!p->mesh) continue;
        const Mesh& src = *p->mesh;
        Mat4 w = u.world_transform(*p);
        std::unordered_map<int, VertexHandle> remap;
        for (VertexHandle v : src.vertexlist()) {
            VertexHandle nv = baked.add_vertex(w.transform_point(src.position(v)));
            baked.set_colour(nv, src.colour(v));
            remap[v.idx] = nv;
        }
        for (FaceHandle f : src.facelist()) {
            auto fv = src.face_vertices(f);
            baked.add_face(remap[fv[0].idx], remap[fv[1].idx], remap[fv[2].idx]);
        }
    }
    if (subdivide > 0) smooth_subdivide(baked, subdivide);
    baked.sync();
    if (format == "obj")
        save_obj(baked, path);
    else
        save_ply(baked, path);
}

std::string frame_path(const std::string& dir, int frame, const std::string& format) {
    char name[64];
    std::snprintf(name, sizeof name, "frame_%06d.", frame);
    return dir + "/" + name + format;
}

}  // namespace procgen
