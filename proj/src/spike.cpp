#include "procgen/spike.hpp"

#include <cmath>
#include <stdexcept>

namespace procgen {

namespace {
constexpr Real kInsetScale = 0.99;  // cap scale applied at each new segment
}

SpikeGrower::SpikeGrower(Mesh& m, VertexHandle v, const SpikeConfig& cfg)
    : m_(&m), v_(v), cfg_(cfg) {
    if (!(std::abs(cfg.speed) > 0))
        throw std::invalid_argument("spike: speed must be nonzero");
    if (!(cfg.seg_length > 0))
        throw std::invalid_argument("spike: seg_length must be positive");
    if (cfg.num_segs < 1)
        throw std::invalid_argument("spike: num_segs must be at least 1");
    if (!(cfg.shrink > 0 && cfg.shrink <= 1))
        throw std::invalid_argument("spike: shrink must be in (0, 1]");
    if (!m.valid(v)) throw StaleHandleError("spike: stale vertex handle");
    if (m.is_boundary(v))
        throw UnsupportedInputError("spike: boundary vertex");
    const Vec3& n = m.normal(v);
    if (norm2(n) == 0)
        throw std::invalid_argument(
            "spike: vertex normal is zero (sync the mesh first)");
    n_ = normalized(n);
}

bool SpikeGrower::update(Real dt) {
    if (!(dt > 0)) throw std::invalid_argument("spike: dt must be positive");
    if (state_ == SpikeState::Done) return false;
    if (!m_->valid(v_)) {
        state_ = SpikeState::Done;
        return false;
    }
    if (state_ == SpikeState::Move)
        do_move(dt);
    else
        do_inset();
    return true;
}

void SpikeGrower::do_inset() {
    cap_ = inset(*m_, v_, kInsetScale);
    std::vector<VertexHandle> ring = capov(*cap_);
    if (cfg_.roll != 0) {
        Vec3 c{0, 0, 0};
        for (VertexHandle h : ring) c = c + m_->position(h);
        c = c * (Real(1) / ring.size());
        Quat q = Quat::from_axis_angle(n_, cfg_.roll);
        for (VertexHandle h : ring)
            m_->set_position(h, c + q.rotate(m_->position(h) - c));
    }
    rings_.push_back(std::move(ring));
    state_ = SpikeState::Move;
    distance_ = 0;
}

void SpikeGrower::do_move(Real dt) {
    Real step = cfg_.speed * dt;
    Vec3 delta = n_ * step;
    m_->set_position(v_, m_->position(v_) + delta);

    if (cap_) {
        std::vector<VertexHandle> outer = capov(*cap_);
        const int k = static_cast<int>(outer.size());
        Vec3 centre{0, 0, 0};
        for (VertexHandle h : outer) {
            m_->set_position(h, m_->position(h) + delta);
            centre = centre + m_->position(h);
        }
        centre = centre * (Real(1) / k);

        // A segment must end with the ring at exactly cfg_.shrink times the
        // previous segment's radius, whatever dt is. Each move therefore
        // applies the per-segment factor raised to the fraction of the
        // segment it covers (travel past seg_length doesn't count), and the
        // 1/kInsetScale term cancels the scale the inset applied when this
        // ring was created.
        Real adv = std::abs(step);
        Real covered = std::min(distance_ + adv, cfg_.seg_length) -
                       std::min(distance_, cfg_.seg_length);
        Real f = std::pow(cfg_.shrink / kInsetScale,
                          covered / cfg_.seg_length);
        for (VertexHandle h : outer)
            m_->set_position(h, centre + (m_->position(h) - centre) * f);

        flattenvl(*m_, outer, m_->position(v_), n_);

        if (cfg_.circularise) {
            Vec3 c{0, 0, 0};
            for (VertexHandle h : outer) c = c + m_->position(h);
            c = c * (Real(1) / k);
            Real mean = 0;
            for (VertexHandle h : outer) mean += norm(m_->position(h) - c);
            mean /= k;
            for (VertexHandle h : outer) {
                Vec3 r = m_->position(h) - c;
                Real len = norm(r);
                if (len > 0) m_->set_position(h, c + r * (mean / len));
            }
        }
    }

    distance_ += std::abs(step);
    if (distance_ > cfg_.seg_length) {
        seg_ += 1;
        if (seg_ <= cfg_.num_segs) {
            state_ = SpikeState::Inset;
            if (cfg_.per_segment) cfg_.per_segment(seg_, cfg_);
        } else {
            state_ = SpikeState::Done;
        }
    }
}

SpikeGrower spike_new(Mesh& m, VertexHandle v, const SpikeConfig& cfg) {
    return SpikeGrower(m, v, cfg);
}

bool spike_update(SpikeGrower& g, Real dt) { return g.update(dt); }

}  // namespace procgen
