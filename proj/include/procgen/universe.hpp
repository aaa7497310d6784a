#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "procgen/geom.hpp"
#include "procgen/mesh.hpp"

namespace procgen {

// Scene-graph node: an invisible anchor, or a mesh carrier. Nodes are owned
// by their universe and their addresses stay stable for its lifetime.
struct Node {
    int id = -1;
    std::optional<Mesh> mesh;  // absent for abstract anchor nodes
    Mat4 local = Mat4::identity();
    Node* parent = nullptr;
};

class Universe {
public:
    Node& add();        // abstract node
    Node& add(Mesh m);  // mesh node

    // Reparents child under parent. Both must belong to this universe;
    // linking a node under itself or a descendant throws HierarchyError.
    void make_child_of(Node& parent, Node& child);

    Mat4 world_transform(const Node& n) const;
    bool owns(const Node& n) const;
    const std::vector<std::unique_ptr<Node>>& nodes() const { return nodes_; }

    void sync_dirty();  // recompute normals on every dirty mesh

    Real t = 0;  // simulation clock, advanced by the run loop

private:
    std::vector<std::unique_ptr<Node>> nodes_;
    int next_id_ = 0;
};

// Bakes every mesh node through its world transform and writes them as one
// file. format: "obj" or "ply". subdivide smooths the exported copy only.
void export_frame(const Universe& u, const std::string& path,
                  const std::string& format = "obj", int subdivide = 0);

// dir/frame_%06d.<format>
std::string frame_path(const std::string& dir, int frame, const std::string& format);

}  // namespace procgen
