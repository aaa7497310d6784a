#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "procgen/error.hpp"
#include "procgen/noise.hpp"
#include "procgen/scene.hpp"

namespace procgen {

Params::Params(const std::vector<ParamDecl>& schema) {
    for (const ParamDecl& d : schema) values_[d.name] = d.def;
}

const ParamValue& Params::lookup(std::string_view name) const {
    auto it = values_.find(name);
    if (it == values_.end())
        throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
    return it->second;
}

void Params::set(const std::string& name, const std::string& value) {
    auto it = values_.find(name);
    if (it == values_.end()) throw std::invalid_argument("unknown parameter '" + name + "'");
    ParamValue& slot = it->second;
    if (std::holds_alternative<std::string>(slot)) {
        slot = value;
        return;
    }
    const char* s = value.c_str();
    char* end = nullptr;
    if (std::holds_alternative<Real>(slot)) {
        Real v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw std::invalid_argument("parameter '" + name + "' expects a real, got '" +
                                        value + "'");
        slot = v;
    } else {
        long v = std::strtol(s, &end, 10);
        if (end == s || *end != '\0')
            throw std::invalid_argument("parameter '" + name + "' expects an integer, got '" +
                                        value + "'");
        slot = v;
    }
}

Real Params::real(std::string_view name) const {
    const ParamValue& v = lookup(name);
    if (!std::holds_alternative<Real>(v))
        throw std::invalid_argument("parameter '" + std::string(name) + "' is not a real");
    return std::get<Real>(v);
}

long Params::integer(std::string_view name) const {
    const ParamValue& v = lookup(name);
    if (!std::holds_alternative<long>(v))
        throw std::invalid_argument("parameter '" + std::string(name) + "' is not an integer");
    return std::get<long>(v);
}

const std::string& Params::text(std::string_view name) const {
    const ParamValue& v = lookup(name);
    if (!std::holds_alternative<std::string>(v))
        throw std::invalid_argument("parameter '" + std::string(name) + "' is not text");
    return std::get<std::string>(v);
}

const SceneInfo* find_scene(std::string_view name) {
    for (const SceneInfo& s : scene_registry())
        if (s.name == name) return &s;
    return nullptr;
}

void run_simulation(const SceneInfo& scene, const Params& params, const RunConfig& cfg) {
    if (cfg.frames < 1) throw std::invalid_argument("run_simulation: frames must be >= 1");
    if (!(cfg.dt > 0)) throw std::invalid_argument("run_simulation: dt must be > 0");

    noise_seed(cfg.seed);
    Universe u;
    std::unique_ptr<Scene> sc = scene.create();
    try {
        sc->setup(u, params);
    } catch (const std::exception& e) {
        throw Error("scene '" + scene.name + "' setup: " + e.what());
    }
    u.sync_dirty();
    for (int frame = 0; frame < cfg.frames; ++frame) {
        try {
            sc->update(u, params, cfg.dt);
        } catch (const std::exception& e) {
            throw Error("scene '" + scene.name + "' frame " + std::to_string(frame) + ": " +
                        e.what());
        }
        u.sync_dirty();
        u.t += cfg.dt;
        if (cfg.on_frame) cfg.on_frame(frame, u);
    }
}

}  // namespace procgen
