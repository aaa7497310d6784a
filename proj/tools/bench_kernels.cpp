#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "procgen/iso.hpp"
#include "procgen/parallel.hpp"
#include "procgen/primitives.hpp"
#include "procgen/subdivide.hpp"

using namespace procgen;

namespace {

template <class F>
double timed(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool same_mesh(const Mesh& a, const Mesh& b) {
    if (a.vertex_count() != b.vertex_count() || a.face_count() != b.face_count()) return false;
    auto av = a.vertexlist(), bv = b.vertexlist();
    for (size_t i = 0; i < av.size(); ++i)
        if (!(a.position(av[i]) == b.position(bv[i]) && a.normal(av[i]) == b.normal(bv[i])))
            return false;
    return true;
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-14s %9.3fs %9.3fs %7.2fx   %s\n", name, serial, parallel,
                serial / parallel, identical ? "bitwise-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int r = argc > 1 ? std::atoi(argv[1]) : 96;
    int levels = argc > 2 ? std::atoi(argv[2]) : 4;

    ScalarField gyroid = [](Real x, Real y, Real z) {
        return std::sin(3 * x) * std::cos(3 * y) + std::sin(3 * y) * std::cos(3 * z) +
               std::sin(3 * z) * std::cos(3 * x) + Real(0.2);
    };

    std::printf("kernel            serial   parallel  speedup\n");

    Mesh iso_s, iso_p;
    double t_iso_s = timed([&] { iso_s = iso_serial(r, gyroid); });
    set_parallel(true);
    double t_iso_p = timed([&] { iso_p = iso(r, gyroid); });
    char label[32];
    std::snprintf(label, sizeof label, "iso(%d)", r);
    row(label, t_iso_s, t_iso_p, same_mesh(iso_s, iso_p));

    Mesh big = create_sphere(2);
    smooth_subdivide(big, levels);
    Mesh big2 = big;
    double t_sync_s = timed([&] {
        big.mark_dirty();
        big.sync_serial();
    });
    double t_sync_p = timed([&] {
        big2.mark_dirty();
        big2.sync();
    });
    std::snprintf(label, sizeof label, "sync(%dv)", big.vertex_count());
    row(label, t_sync_s, t_sync_p, same_mesh(big, big2));
    return 0;
}
