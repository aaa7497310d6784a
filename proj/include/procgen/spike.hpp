#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "procgen/mesh_ops.hpp"

namespace procgen {

enum class SpikeState { Move, Inset, Done };

struct SpikeConfig {
    Real speed = 4;       // units/second; negative grows inward (suckers)
    Real seg_length = 0.1;
    int num_segs = 5;
    Real shrink = 0.8;    // outer-ring radius ratio between segments

    // Optional tweaks.
    Real roll = 0;             // radians, applied to each fresh ring about n
    bool circularise = false;  // snap the ring to a circle after flattening
    // Called when a segment completes, before the next inset; may adjust the
    // live config (height-dependent growth and the like).
    std::function<void(int seg, SpikeConfig&)> per_segment;
};

// Continuous-extrusion state machine: alternates a move phase (tip + cap ring
// translate along the stored normal, ring shrinking and staying flat) with an
// inset phase that starts each new segment. update() returns false once the
// grower is done.
class SpikeGrower {
public:
    SpikeGrower(Mesh& m, VertexHandle v, const SpikeConfig& cfg);

    bool update(Real dt);
    void finish() { state_ = SpikeState::Done; }

    SpikeState state() const { return state_; }
    int seg() const { return seg_; }
    Real distance() const { return distance_; }
    VertexHandle tip() const { return v_; }
    const Vec3& direction() const { return n_; }
    const SpikeConfig& config() const { return cfg_; }
    // One entry per inset event: the outer-ring vertices of that segment.
    const std::vector<std::vector<VertexHandle>>& rings() const {
        return rings_;
    }

private:
    void do_move(Real dt);
    void do_inset();

    Mesh* m_;
    VertexHandle v_;
    Vec3 n_;
    SpikeConfig cfg_;
    SpikeState state_ = SpikeState::Move;
    int seg_ = 1;
    Real distance_ = 0;
    std::optional<Cap> cap_;
    std::vector<std::vector<VertexHandle>> rings_;
};

SpikeGrower spike_new(Mesh& m, VertexHandle v, const SpikeConfig& cfg = {});
bool spike_update(SpikeGrower& g, Real dt);

}  // namespace procgen
