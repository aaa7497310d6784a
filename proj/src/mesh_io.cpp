#include "procgen/mesh_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace procgen {
namespace {

[[noreturn]] void bad_line(const std::string& path, int line, const std::string& what) {
    throw IoError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Mesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Mesh m;
    std::vector<VertexHandle> verts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Real x, y, z;
            if (!(ss >> x >> y >> z)) bad_line(path, lineno, "malformed vertex record");
            verts.push_back(m.add_vertex({x, y, z}));
        } else if (tag == "vn") {
            Real x, y, z;
            if (!(ss >> x >> y >> z)) bad_line(path, lineno, "malformed normal record");
            // Normals are regenerated by sync; the record is validated and dropped.
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ss >> tok) {
                size_t slash = tok.find('/');
                std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
                int i = 0;
                try {
                    i = std::stoi(head);
                } catch (const std::exception&) {
                    bad_line(path, lineno, "malformed face index '" + tok + "'");
                }
                if (i <= 0 || i > static_cast<int>(verts.size()))
                    bad_line(path, lineno, "face index out of range: " + head);
                idx.push_back(i - 1);
            }
            if (idx.size() < 3) bad_line(path, lineno, "face needs at least 3 indices");
            for (size_t k = 2; k < idx.size(); ++k)
                m.add_face(verts[idx[0]], verts[idx[k - 1]], verts[idx[k]]);
        }
        // Other record types (vt, o, g, s, usemtl, ...) are ignored.
    }
    m.mark_dirty();
    return m;
}

void save_obj(const Mesh& m, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw IoError("cannot write '" + path + "'");
    std::fprintf(out, "# procgen mesh: %d vertices, %d faces\n", m.vertex_count(),
                 m.face_count());
    bool with_normals = !m.dirty();
    std::unordered_map<int, int> remap;  // slot -> 1-based obj index
    int next = 1;
    for (VertexHandle v : m.vertexlist()) {
        const Vec3& p = m.position(v);
        std::fprintf(out, "v %.9g %.9g %.9g\n", p.x, p.y, p.z);
        remap[v.idx] = next++;
    }
    if (with_normals)
        for (VertexHandle v : m.vertexlist()) {
            const Vec3& n = m.normal(v);
            std::fprintf(out, "vn %.9g %.9g %.9g\n", n.x, n.y, n.z);
        }
    for (FaceHandle f : m.facelist()) {
        auto fv = m.face_vertices(f);
        int a = remap[fv[0].idx], b = remap[fv[1].idx], c = remap[fv[2].idx];
        if (with_normals)
            std::fprintf(out, "f %d//%d %d//%d %d//%d\n", a, a, b, b, c, c);
        else
            std::fprintf(out, "f %d %d %d\n", a, b, c);
    }
    if (std::fclose(out) != 0) throw IoError("error closing '" + path + "'");
}

void save_ply(const Mesh& m, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw IoError("cannot write '" + path + "'");
    std::fprintf(out,
                 "ply\nformat binary_little_endian 1.0\n"
                 "element vertex %d\n"
                 "property float x\nproperty float y\nproperty float z\n"
                 "element face %d\n"
                 "property list uchar int vertex_indices\nend_header\n",
                 m.vertex_count(), m.face_count());
    std::unordered_map<int, std::int32_t> remap;
    std::int32_t next = 0;
    for (VertexHandle v : m.vertexlist()) {
        const Vec3& p = m.position(v);
        float xyz[3] = {static_cast<float>(p.x), static_cast<float>(p.y),
                        static_cast<float>(p.z)};
        std::fwrite(xyz, sizeof(float), 3, out);
        remap[v.idx] = next++;
    }
    for (FaceHandle f : m.facelist()) {
        auto fv = m.face_vertices(f);
        unsigned char n = 3;
        std::fwrite(&n, 1, 1, out);
        std::int32_t idx[3] = {remap[fv[0].idx], remap[fv[1].idx], remap[fv[2].idx]};
        std::fwrite(idx, sizeof(std::int32_t), 3, out);
    }
    if (std::fclose(out) != 0) throw IoError("error closing '" + path + "'");
}

}  // namespace procgen
