#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "sela/types.hpp"

namespace sela::reward {

/// Turns the robot state before and after one behavior into a generic reward.
using Aggregator = std::function<GenericReward(const Pose& before, const Pose& after)>;

/// (x_after - x_before, y_after - y_before)
GenericReward displacement_aggregator(const Pose& before, const Pose& after);

/// g -> -|| (current + g) - waypoint ||, maximal (0) at g = waypoint - current.
RewardFunction make_distance_reward(const Pose& waypoint, const Pose& current);

struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Axis-aligned occupancy grid for the planner. Cell (i, j) covers
/// [lower + i * cell_size, lower + (i + 1) * cell_size) on each axis.
class PlannerGrid {
public:
    PlannerGrid(Pose lower_corner, double cell_size, int width, int height);

    /// Grid containing start and goal at cell centers (when their offset is a
    /// multiple of cell_size) with `margin` free cells around both.
    static PlannerGrid around(const Pose& start, const Pose& goal, double cell_size, int margin);

    bool in_bounds(const Cell& c) const;
    bool blocked(const Cell& c) const { return blocked_.contains(c); }
    void block(const Cell& c);

    /// Containing cell; points outside the bounds map to the nearest edge cell.
    Cell cell_of(const Pose& p) const;
    Pose center(const Cell& c) const;

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size() const { return cell_size_; }
    const Pose& lower_corner() const { return lower_; }

private:
    Pose lower_;
    double cell_size_;
    int width_;
    int height_;
    std::set<Cell> blocked_;
};

/// Shortest 4-connected path with unit step cost, start and goal included.
/// std::nullopt when the goal cannot be reached. Among equally short paths
/// the one hugging the straight start-goal line is preferred.
std::optional<std::vector<Cell>> astar(const PlannerGrid& grid, const Cell& start, const Cell& goal);

/// Center of the path cell `lookahead` cells past the one containing
/// `current`, clamped to the last cell.
Pose select_waypoint(const PlannerGrid& grid, std::span<const Cell> path, const Pose& current,
                     int lookahead);

class UnreachableGoal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RslConfig {
    double cell_size = 0.1;
    int lookahead_cells = 4;
    int margin_cells = 10;
};

/// Reward selection layer: plan from the current pose, pick the waypoint and
/// build the distance reward around it. When the chosen cell is the goal cell
/// the exact goal point is used. Throws UnreachableGoal.
RewardFunction rsl_update(const Pose& pose, const Pose& goal, const PlannerGrid& grid,
                          int lookahead_cells);

/// The waypoint rsl_update would aim for.
Pose rsl_waypoint(const Pose& pose, const Pose& goal, const PlannerGrid& grid, int lookahead_cells);

} // namespace sela::reward
