#include "minpower/region.hpp"

#include "minpower/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace minpower {

bool BroadcastRegion::contains(const PowerModel& m, const Location& pt) const {
    return leq_with_slack(transmit_power(m, center, pt), power);
}

double BroadcastRegion::radius(const PowerModel& m) const {
    return std::pow(power / m.t, 1.0 / m.n);
}

bool EtaRegion::contains(const PowerModel& m, const Location& pt) const {
    if (!BroadcastRegion{center, m.p_max}.contains(m, pt)) return false;
    for (const Location& w : obstructors) {
        if (relay_beats_direct(m, center, w, pt)) return false;
    }
    return true;
}

bool EtaRegion::contains_excluding(const PowerModel& m, const Location& pt,
                                   std::size_t skip) const {
    if (!BroadcastRegion{center, m.p_max}.contains(m, pt)) return false;
    for (std::size_t i = 0; i < obstructors.size(); ++i) {
        if (i == skip) continue;
        if (relay_beats_direct(m, center, obstructors[i], pt)) return false;
    }
    return true;
}

void SamplingSpec::validate() const {
    if (rays < 64) throw std::invalid_argument("sampling spec: rays must be >= 64");
    if (radial_samples < 32) {
        throw std::invalid_argument("sampling spec: radial_samples must be >= 32");
    }
}

SamplingSpec SamplingSpec::refined(std::uint32_t factor) const {
    return SamplingSpec{rays * factor, radial_samples * factor};
}

EtaSampler::EtaSampler(const PowerModel& m, const Location& center, const SamplingSpec& spec)
    : model_(m), center_(center), spec_(spec) {
    m.validate();
    spec.validate();
    radius_ = max_range(m);
    cos_.resize(spec.rays);
    sin_.resize(spec.rays);
    for (std::uint32_t i = 0; i < spec.rays; ++i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(spec.rays);
        cos_[i] = std::cos(theta);
        sin_[i] = std::sin(theta);
    }
    cut_.assign(spec.rays, spec.radial_samples + 1);
}

Location EtaSampler::grid_point(std::uint32_t ray, std::uint32_t idx) const {
    const double r = radius_ * static_cast<double>(idx) /
                     static_cast<double>(spec_.radial_samples);
    return Location{center_.x + r * cos_[ray], center_.y + r * sin_[ray]};
}

bool EtaSampler::excluded_by(const Location& w, const Location& pt) const {
    return relay_beats_direct(model_, center_, w, pt);
}

void EtaSampler::add_obstructor(const Location& w) {
    // Node-location samples: the new obstructor may kill existing ones, and
    // the existing set decides whether the new one starts live.
    NodeSample sample{w, distance_squared(center_, w), false};
    bool live = leq_with_slack(power_from_distance_squared(model_, sample.d2), model_.p_max);
    for (NodeSample& other : nodes_) {
        if (live && excluded_by(other.loc, w)) live = false;
        if (other.live && excluded_by(w, other.loc)) other.live = false;
    }
    sample.live = live;
    nodes_.push_back(sample);

    // Grid samples: per ray, the region excluded by w is a suffix, so a ray
    // is affected at all iff its outermost point is excluded; the suffix
    // start is then located by binary search.
    const std::uint32_t last = spec_.radial_samples;
    for (std::uint32_t ray = 0; ray < spec_.rays; ++ray) {
        if (cut_[ray] == 1) continue;  // ray already fully excluded
        if (!excluded_by(w, grid_point(ray, last))) continue;
        std::uint32_t lo = 1, hi = cut_[ray] - 1;  // search within the live prefix
        // smallest idx in [lo, hi] excluded by w; hi may itself be live
        std::uint32_t first = cut_[ray];
        while (lo <= hi) {
            const std::uint32_t mid = lo + (hi - lo) / 2;
            if (excluded_by(w, grid_point(ray, mid))) {
                first = mid;
                if (mid == 1) break;
                hi = mid - 1;
            } else {
                lo = mid + 1;
            }
        }
        cut_[ray] = std::min(cut_[ray], first);
    }
}

double EtaSampler::max_live_d2() const {
    double best = -1.0;
    for (std::uint32_t ray = 0; ray < spec_.rays; ++ray) {
        if (cut_[ray] <= 1) continue;
        best = std::max(best, distance_squared(center_, grid_point(ray, cut_[ray] - 1)));
    }
    for (const NodeSample& s : nodes_) {
        if (s.live) best = std::max(best, s.d2);
    }
    return best;
}

double EtaSampler::covering_power() const {
    const double d2 = max_live_d2();
    if (d2 < 0.0) return 0.0;
    return std::clamp(power_from_distance_squared(model_, d2), 0.0, model_.p_max);
}

bool EtaSampler::covered_by(double power) const {
    const double d2 = max_live_d2();
    if (d2 < 0.0) return true;
    return leq_with_slack(power_from_distance_squared(model_, d2), power);
}

bool region_covers_eta(const PowerModel& m, const BroadcastRegion& f, const EtaRegion& eta,
                       const SamplingSpec& spec) {
    if (!(f.center == eta.center)) {
        throw std::invalid_argument("region_covers_eta: F and eta centers differ");
    }
    EtaSampler sampler(m, eta.center, spec);
    for (const Location& w : eta.obstructors) sampler.add_obstructor(w);
    return sampler.covered_by(f.power);
}

double min_covering_power(const PowerModel& m, const EtaRegion& eta, const SamplingSpec& spec) {
    EtaSampler sampler(m, eta.center, spec);
    for (const Location& w : eta.obstructors) sampler.add_obstructor(w);
    return sampler.covering_power();
}

namespace {

// Closed feasibility of an angle on the p_max circle against every
// half-plane constraint dot(pt, w) <= |w|^2 (center translated to origin).
bool circle_angle_feasible(double radius, double theta,
                           const std::vector<Location>& ws) {
    const double px = radius * std::cos(theta);
    const double py = radius * std::sin(theta);
    for (const Location& w : ws) {
        const double rhs = w.x * w.x + w.y * w.y;
        const double lhs = px * w.x + py * w.y;
        if (lhs > rhs + kRelEps * std::max(1.0, std::fabs(rhs))) return false;
    }
    return true;
}

} // namespace

double halfplane_covering_radius(const PowerModel& m, const EtaRegion& eta) {
    m.validate();
    if (m.n != 2.0 || m.c != 0.0) {
        throw std::invalid_argument("halfplane_covering_radius: requires n == 2, c == 0");
    }
    const double radius = max_range(m);

    // Translate obstructors so the search center is the origin. For n = 2,
    // c = 0 the relay condition t*(|w|^2 + |pt-w|^2) <= t*|pt|^2 reduces to
    // dot(pt, w) >= |w|^2, so eta's closure is the disc intersected with the
    // closed half-planes dot(pt, w) <= |w|^2: a convex region.
    std::vector<Location> ws;
    ws.reserve(eta.obstructors.size());
    for (const Location& o : eta.obstructors) {
        const Location w{o.x - eta.center.x, o.y - eta.center.y};
        if (w.x * w.x + w.y * w.y == 0.0) return 0.0;  // obstructor at the center
        ws.push_back(w);
    }
    if (ws.empty()) return radius;

    // If any point of the boundary circle is feasible the sup is the full
    // radius. The feasible set on the circle, if nonempty, either is the
    // whole circle or has an endpoint on some constraint boundary, so probing
    // all constraint boundary angles plus one arbitrary angle decides it.
    std::vector<double> probes{0.0};
    for (const Location& w : ws) {
        const double len = std::sqrt(w.x * w.x + w.y * w.y);
        const double phi = std::atan2(w.y, w.x);
        const double ratio = std::min(1.0, len / radius);
        const double alpha = std::acos(ratio);
        probes.push_back(phi + alpha);
        probes.push_back(phi - alpha);
        probes.push_back(phi + std::numbers::pi);
    }
    for (double theta : probes) {
        if (circle_angle_feasible(radius, theta, ws)) return radius;
    }

    // Otherwise the region is a convex polygon strictly inside the disc; the
    // farthest point from the center is one of its vertices, each the
    // intersection of two constraint boundaries.
    double best2 = 0.0;  // the center itself is always feasible
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) {
            const Location& a = ws[i];
            const Location& b = ws[j];
            const double det = a.x * b.y - a.y * b.x;
            const double scale = std::max({std::fabs(a.x), std::fabs(a.y),
                                           std::fabs(b.x), std::fabs(b.y)});
            if (std::fabs(det) <= 1e-12 * scale * scale) continue;  // parallel boundaries
            const double ra = a.x * a.x + a.y * a.y;
            const double rb = b.x * b.x + b.y * b.y;
            const double px = (ra * b.y - rb * a.y) / det;
            const double py = (rb * a.x - ra * b.x) / det;
            const double p2 = px * px + py * py;
            if (p2 > radius * radius * (1.0 + kRelEps)) continue;
            bool feasible = true;
            for (const Location& w : ws) {
                const double rhs = w.x * w.x + w.y * w.y;
                if (px * w.x + py * w.y > rhs + kRelEps * std::max(1.0, rhs)) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) best2 = std::max(best2, p2);
        }
    }
    return std::sqrt(best2);
}

} // namespace minpower
