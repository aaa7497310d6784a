#include "procgen/parallel.hpp"

namespace procgen {
namespace {
bool g_parallel = true;
}

void set_parallel(bool enabled) { g_parallel = enabled; }
bool parallel_enabled() { return g_parallel; }

}  // namespace procgen
