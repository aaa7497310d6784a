#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "procgen/error.hpp"
#include "procgen/lsystem.hpp"
#include "procgen/mesh_io.hpp"
#include "procgen/noise.hpp"
#include "procgen/scene.hpp"
#include "procgen/universe.hpp"

using namespace procgen;

namespace {

std::string format_value(const ParamValue& v) {
    if (std::holds_alternative<Real>(v)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", std::get<Real>(v));
        return buf;
    }
    if (std::holds_alternative<long>(v)) return std::to_string(std::get<long>(v));
    const std::string& s = std::get<std::string>(v);
    return s.empty() ? "\"\"" : s;
}

int list_scenes() {
    for (const SceneInfo& s : scene_registry()) {
        std::cout << s.name << " - " << s.description << "\n";
        for (const ParamDecl& d : s.schema)
            std::cout << "    " << d.name << "=" << format_value(d.def) << "  " << d.help
                      << "\n";
    }
    return 0;
}

int run_scene(const std::string& name, int frames, double dt, const std::string& out,
              const std::string& format, int subdivide, std::uint64_t seed,
              const std::vector<std::string>& overrides) {
    const SceneInfo* info = find_scene(name);
    if (!info) {
        std::cerr << "unknown scene '" << name << "'; try 'procgen scenes'\n";
        return 1;
    }
    Params params(info->schema);
    for (const std::string& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "--param expects key=value, got '" << kv << "'\n";
            return 1;
        }
        try {
            params.set(kv.substr(0, eq), kv.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            std::cerr << e.what() << "\n";
            return 1;
        }
    }
    std::filesystem::create_directories(out);
    RunConfig cfg;
    cfg.frames = frames;
    cfg.dt = dt;
    cfg.seed = seed;
    cfg.on_frame = [&](int frame, const Universe& u) {
        std::string path = frame_path(out, frame, format);
        export_frame(u, path, format, subdivide);
        std::cout << "wrote " << path << "\n";
    };
    run_simulation(*info, params, cfg);
    return 0;
}

int derive_file(const std::string& file, int steps, double time_total, double dt) {
    LSystem ls = load_lsystem(file);
    std::cout << "0: " << to_string(ls.current()) << "\n";
    if (time_total > 0) {
        if (!(dt > 0)) {
            std::cerr << "--time needs --dt > 0\n";
            return 1;
        }
        int k = 0;
        while (ls.clock() < time_total - 1e-12) {
            ls.derive_timed(dt);
            char head[48];
            std::snprintf(head, sizeof head, "t=%.6g: ", ls.clock());
            std::cout << head << to_string(ls.current()) << "\n";
            if (++k > 1000000) throw Error("derivation time cap exceeded");
        }
    } else {
        for (int k = 1; k <= steps; ++k) {
            ls.derive();
            std::cout << k << ": " << to_string(ls.current()) << "\n";
        }
    }
    return 0;
}

int mesh_info(const std::string& file) {
    Mesh m = load_obj(file);
    auto a = m.audit();
    std::cout << "vertices: " << a.v << "\n"
              << "edges: " << a.e << "\n"
              << "faces: " << a.f << "\n"
              << "euler: " << a.euler() << "\n"
              << "manifold: " << (a.manifold ? "true" : "false") << "\n"
              << "closed: " << (a.closed ? "true" : "false") << "\n"
              << "boundary_edges: " << a.boundary_edges << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch procedural-geometry engine"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    if (const char* env = std::getenv("PROCGEN_SEED")) seed = std::strtoull(env, nullptr, 10);

    auto* run = app.add_subcommand("run", "simulate a scene and export one file per frame");
    std::string scene_name, out_dir = "out", format = "obj";
    int frames = 60, subdivide = 0;
    double dt = 1.0 / 60;
    std::vector<std::string> overrides;
    run->add_option("scene", scene_name, "scene name (see 'scenes')")->required();
    run->add_option("--frames", frames, "number of frames")->check(CLI::PositiveNumber);
    run->add_option("--dt", dt, "seconds per frame")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--format", format, "obj or ply")->check(CLI::IsMember({"obj", "ply"}));
    run->add_option("--subdivide", subdivide, "smoothing levels on export")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--seed", seed, "noise seed (default $PROCGEN_SEED or 0)");
    run->add_option("--param", overrides, "scene parameter override key=value");

    app.add_subcommand("scenes", "list scenes and their parameters");

    auto* lsys = app.add_subcommand("lsys", "L-system tools")->require_subcommand(1);
    auto* derive = lsys->add_subcommand("derive", "print a derivation trace");
    std::string lsys_file;
    int steps = 1;
    double time_total = -1, lsys_dt = 0.1;
    derive->add_option("file", lsys_file, ".lsys grammar file")->required();
    auto* steps_opt = derive->add_option("--steps", steps, "discrete derivations");
    auto* time_opt = derive->add_option("--time", time_total, "timed derivation horizon");
    derive->add_option("--dt", lsys_dt, "timestep for --time");
    steps_opt->excludes(time_opt);
    time_opt->excludes(steps_opt);

    auto* mesh = app.add_subcommand("mesh", "mesh tools")->require_subcommand(1);
    auto* info = mesh->add_subcommand("info", "print mesh statistics");
    std::string mesh_file;
    info->add_option("file", mesh_file, "OBJ file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("scenes")) return list_scenes();
        if (app.got_subcommand("run"))
            return run_scene(scene_name, frames, dt, out_dir, format, subdivide, seed,
                             overrides);
        if (app.got_subcommand("lsys"))
            return derive_file(lsys_file, steps, time_total, lsys_dt);
        if (app.got_subcommand("mesh")) return mesh_info(mesh_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
