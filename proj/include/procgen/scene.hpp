#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "procgen/universe.hpp"

namespace procgen {

// Declared parameter: the default's alternative fixes the type (real,
// integer or text) that set() will parse.
using ParamValue = std::variant<Real, long, std::string>;

struct ParamDecl {
    std::string name;
    ParamValue def;
    std::string help;
};

class Params {
public:
    Params() = default;
    explicit Params(const std::vector<ParamDecl>& schema);

    // Parses value according to the declared type. Unknown names and
    // malformed numbers throw std::invalid_argument.
    void set(const std::string& name, const std::string& value);

    Real real(std::string_view name) const;
    long integer(std::string_view name) const;
    const std::string& text(std::string_view name) const;

private:
    const ParamValue& lookup(std::string_view name) const;
    std::map<std::string, ParamValue, std::less<>> values_;
};

// A scene instance carries per-run state between setup and the updates.
class Scene {
public:
    virtual ~Scene() = default;
    virtual void setup(Universe& u, const Params& p) = 0;
    virtual void update(Universe& u, const Params& p, Real dt) = 0;
};

struct SceneInfo {
    std::string name;
    std::string description;
    std::vector<ParamDecl> schema;
    std::function<std::unique_ptr<Scene>()> create;
};

const std::vector<SceneInfo>& scene_registry();
const SceneInfo* find_scene(std::string_view name);

// The grammar source compiled into the calcispongiae scene; the same text
// ships as assets/calcispongiae.lsys.
const char* calcispongiae_source();

struct RunConfig {
    int frames = 1;
    Real dt = Real(1) / 60;
    std::uint64_t seed = 0;
    // Called once per frame after meshes are synced and t advanced.
    std::function<void(int frame, const Universe& u)> on_frame;
};

// Seeds the noise generator, runs setup once, then frames * (update, sync
// dirty meshes, t += dt, on_frame). Scene exceptions are rethrown as Error
// tagged with the scene name and frame index.
void run_simulation(const SceneInfo& scene, const Params& params, const RunConfig& cfg);

}  // namespace procgen
