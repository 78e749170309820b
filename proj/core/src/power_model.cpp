#include "minpower/power_model.hpp"

#include <cmath>
#include <stdexcept>

namespace minpower {

double distance_squared(const Location& a, const Location& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double distance(const Location& a, const Location& b) {
    return std::sqrt(distance_squared(a, b));
}

void PowerModel::validate() const {
    if (!(t > 0.0)) throw std::invalid_argument("power model: t must be > 0");
    if (!(n >= 2.0)) throw std::invalid_argument("power model: n must be >= 2");
    if (!(c >= 0.0)) throw std::invalid_argument("power model: c must be >= 0");
    if (!(p_max > 0.0)) throw std::invalid_argument("power model: p_max must be > 0");
}

double power_from_distance_squared(const PowerModel& m, double d2) {
    const double half = m.n * 0.5;
    const int k = static_cast<int>(half);
    if (static_cast<double>(k) == half && k >= 1 && k <= 8) {
        double acc = d2;  // d^n == (d^2)^(n/2) for even n
        for (int i = 1; i < k; ++i) acc *= d2;
        return m.t * acc;
    }
    return m.t * std::pow(std::sqrt(d2), m.n);
}

double transmit_power(const PowerModel& m, const Location& u, const Location& v) {
    return power_from_distance_squared(m, distance_squared(u, v));
}

double link_cost(const PowerModel& m, const Location& u, const Location& v) {
    return transmit_power(m, u, v) + m.c;
}

double path_cost(const PowerModel& m, std::span<const Location> path) {
    if (path.empty()) throw std::invalid_argument("path_cost: empty path");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        total += link_cost(m, path[i], path[i + 1]);
    }
    return total;
}

bool relay_beats_direct(const PowerModel& m, const Location& u, const Location& v,
                        const Location& target) {
    return link_cost(m, u, v) + link_cost(m, v, target) <= link_cost(m, u, target);
}

double max_range(const PowerModel& m) {
    return std::pow(m.p_max / m.t, 1.0 / m.n);
}

} // namespace minpower
