#pragma once

#include <span>

namespace minpower {

struct Location {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Location& a, const Location& b) {
        return a.x == b.x && a.y == b.y;
    }
};

double distance_squared(const Location& a, const Location& b);
double distance(const Location& a, const Location& b);

// Radio energy model. Transmitting over distance d costs t * d^n; receiving
// any transmission costs a fixed c. p_max caps transmit power and therefore
// induces the maximum link range.
struct PowerModel {
    double t = 1.0;      // path-loss coefficient, > 0
    double n = 2.0;      // path-loss exponent, >= 2
    double c = 0.0;      // reception cost per hop, >= 0
    double p_max = 1.0;  // transmit power cap, > 0

    void validate() const;  // throws std::invalid_argument on bad parameters
};

// t * d^n computed from a squared distance. Even integer exponents avoid the
// square root entirely; all power evaluations share this path so equal inputs
// give bit-equal outputs.
double power_from_distance_squared(const PowerModel& m, double d2);

// p(u,v) = t * d(u,v)^n
double transmit_power(const PowerModel& m, const Location& u, const Location& v);

// Transmit power plus the receiver's fixed cost c.
double link_cost(const PowerModel& m, const Location& u, const Location& v);

// Total cost of traversing the locations in order; every hop pays both the
// transmit power and the reception cost. A single location costs 0; an empty
// path is rejected.
double path_cost(const PowerModel& m, std::span<const Location> path);

// True iff relaying through v costs no more than transmitting directly:
//   link(u,v) + link(v,target) <= link(u,target)
// The comparison is deliberately non-strict; ties count as relayed. The set
// of targets for which this holds is the relay region of v w.r.t. u.
bool relay_beats_direct(const PowerModel& m, const Location& u, const Location& v,
                        const Location& target);

// Largest reachable link distance: (p_max / t)^(1/n).
double max_range(const PowerModel& m);

} // namespace minpower
