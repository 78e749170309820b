#pragma once

#include "minpower/power_model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace minpower {

// Disc a node covers when transmitting at `power`:
//   { pt : t * d(center, pt)^n <= power }.
// Membership compares in power space with the library's relative slack so a
// point constructed on the boundary stays inside.
struct BroadcastRegion {
    Location center;
    double power = 0.0;

    bool contains(const PowerModel& m, const Location& pt) const;
    double radius(const PowerModel& m) const;  // (power / t)^(1/n)
};

// The region a searching node must still cover: points of the p_max disc
// around `center` that no obstructor relays at equal-or-lower cost.
//   contains(pt) = pt in F(center, p_max)  and
//                  for every obstructor w: not relay_beats_direct(center, w, pt)
// Membership is exact; only the covering queries below sample.
struct EtaRegion {
    Location center;
    std::vector<Location> obstructors;

    bool contains(const PowerModel& m, const Location& pt) const;

    // Membership with obstructors[skip] ignored. A node cannot relay to its
    // own location (the two-hop path through itself does not exist), so the
    // sampled queries test each obstructor's location this way. For c > 0
    // the result is identical to contains(); with c == 0 the self test is a
    // cost tie and would spuriously exclude the obstructor's own location.
    bool contains_excluding(const PowerModel& m, const Location& pt, std::size_t skip) const;
};

// Polar sampling resolution over the p_max disc.
struct SamplingSpec {
    std::uint32_t rays = 1024;
    std::uint32_t radial_samples = 128;

    void validate() const;  // rays >= 64, radial_samples >= 32
    SamplingSpec refined(std::uint32_t factor) const;
};

// Incremental sampled view of an EtaRegion; this is the engine behind the
// stateless queries and the neighbor-search protocols. Obstructors can only
// be added. Key geometric fact: along any ray from the center, the relay
// condition for a fixed obstructor is monotone outward (once a point is
// relayed, all farther points on the ray are too), so the excluded part of
// each ray is a suffix of the radial grid and one cut index per ray suffices.
class EtaSampler {
public:
    EtaSampler(const PowerModel& m, const Location& center, const SamplingSpec& spec);

    void add_obstructor(const Location& w);

    // Squared distance of the farthest live sample (polar grid point or
    // obstructor location), or a negative value if no sample is live.
    double max_live_d2() const;

    // t * (sup sampled distance)^n clamped to [0, p_max]; 0 if nothing lives.
    double covering_power() const;

    // True iff no live sample lies outside F(center, power).
    bool covered_by(double power) const;

    std::size_t obstructor_count() const { return nodes_.size(); }

private:
    Location grid_point(std::uint32_t ray, std::uint32_t idx) const;
    bool excluded_by(const Location& w, const Location& pt) const;

    struct NodeSample {
        Location loc;
        double d2 = 0.0;
        bool live = false;
    };

    PowerModel model_;
    Location center_;
    SamplingSpec spec_;
    double radius_ = 0.0;  // max_range(model)
    std::vector<double> cos_;
    std::vector<double> sin_;
    // First excluded radial index per ray (1-based grid); radial_samples + 1
    // means the whole ray is live.
    std::vector<std::uint32_t> cut_;
    std::vector<NodeSample> nodes_;
};

// True iff no sampled point of eta lies outside f. Sampling covers a polar
// grid of spec.rays x spec.radial_samples over the p_max disc plus every
// obstructor location. Requires f.center == eta.center.
bool region_covers_eta(const PowerModel& m, const BroadcastRegion& f, const EtaRegion& eta,
                       const SamplingSpec& spec);

// Smallest power whose disc covers every sampled eta point:
// t * (sup sampled distance)^n clamped to [0, p_max]; 0 when the sampled
// region is empty, p_max when there are no obstructors.
double min_covering_power(const PowerModel& m, const EtaRegion& eta, const SamplingSpec& spec);

// Exact covering radius for the n == 2, c == 0 model, where each relay
// region is the half-plane { pt : dot(pt - u, w - u) >= |w - u|^2 }. Returns
// the sup of d(center, .) over the closure of eta (0 if empty). This is a
// sampling-free second route used to cross-check the sampled queries.
double halfplane_covering_radius(const PowerModel& m, const EtaRegion& eta);

} // namespace minpower
