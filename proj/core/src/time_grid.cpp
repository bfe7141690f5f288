#include "gmfc/time_grid.hpp"

#include "gmfc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gmfc {

TimeGrid::TimeGrid(double t0, double T, std::size_t steps) : t0_(t0), T_(T), steps_(steps) {
    if (steps == 0) throw DomainError("time grid needs at least one step");
    if (!(T > t0) || !std::isfinite(t0) || !std::isfinite(T)) throw DomainError("time grid needs t0 < T");
    dt_ = (T - t0) / static_cast<double>(steps);
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
    if (factor == 0) throw DomainError("refinement factor must be positive");
    return TimeGrid(t0_, T_, steps_ * factor);
}

TimeGrid make_time_grid(const Horizon& horizon, double steps_per_unit) {
    if (!(steps_per_unit > 0.0)) throw DomainError("steps per unit time must be positive");
    const double raw = (horizon.T - horizon.t0) * steps_per_unit;
    // Guard against 1000.0000000001 style round-up.
    const double steps = std::ceil(raw - 1e-9 * std::max(1.0, raw));
    return TimeGrid(horizon.t0, horizon.T, static_cast<std::size_t>(std::max(1.0, steps)));
}

}  // namespace gmfc
