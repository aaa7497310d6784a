#pragma once

namespace procgen {

extern const int kMcEdgeTable[256];
extern const int kMcTriTable[256][16];

}  // namespace procgen
