#include "sela/reward.hpp"

#include <sstream>

#include "sela/format.hpp"

namespace sela::reward {

GenericReward displacement_aggregator(const Pose& before, const Pose& after)
{
    GenericReward g(2);
    g << after.x() - before.x(), after.y() - before.y();
    return g;
}

RewardFunction make_distance_reward(const Pose& waypoint, const Pose& current)
{
    RewardFunction r;
    r.eval = [waypoint, current](const GenericReward& g) {
        return -(current + Pose(g[0], g[1]) - waypoint).norm();
    };
    r.description = "-distance to (" + format_double(waypoint.x()) + ", " +
                    format_double(waypoint.y()) + ")";
    return r;
}

Pose rsl_waypoint(const Pose& pose, const Pose& goal, const PlannerGrid& grid, int lookahead_cells)
{
    const Cell from = grid.cell_of(pose);
    const Cell to = grid.cell_of(goal);
    const auto path = astar(grid, from, to);
    if (!path) {
        std::ostringstream msg;
        msg << "goal cell (" << to.x << ", " << to.y << ") unreachable from (" << from.x << ", "
            << from.y << ")";
        throw UnreachableGoal(msg.str());
    }
    const Pose waypoint = select_waypoint(grid, *path, pose, lookahead_cells);
    if (grid.cell_of(waypoint) == to)
        return goal;
    return waypoint;
}

RewardFunction rsl_update(const Pose& pose, const Pose& goal, const PlannerGrid& grid,
                          int lookahead_cells)
{
    return make_distance_reward(rsl_waypoint(pose, goal, grid, lookahead_cells), pose);
}

} // namespace sela::reward
