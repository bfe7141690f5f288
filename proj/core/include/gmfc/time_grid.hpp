#pragma once

#include "gmfc/model.hpp"

#include <cstddef>

namespace gmfc {

/// Uniform time grid t_k = t0 + k*dt, k = 0..steps, with t_steps == T exactly.
class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(double t0, double T, std::size_t steps);

    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double T() const noexcept { return T_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] std::size_t nodes() const noexcept { return steps_ + 1; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] double node(std::size_t k) const noexcept { return k == steps_ ? T_ : t0_ + static_cast<double>(k) * dt_; }
    /// Time of half-node h in [0, 2*steps]: node(h/2) or a step midpoint.
    [[nodiscard]] double half_node(std::size_t h) const noexcept {
        return h == 2 * steps_ ? T_ : t0_ + 0.5 * static_cast<double>(h) * dt_;
    }

    /// Same interval with `factor` times as many steps.
    [[nodiscard]] TimeGrid refined(std::size_t factor) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_ = 0.0;
    double T_ = 1.0;
    std::size_t steps_ = 1;
    double dt_ = 1.0;
};

/// ceil((T - t0) * steps_per_unit) steps, at least one.
TimeGrid make_time_grid(const Horizon& horizon, double steps_per_unit);

}  // namespace gmfc
