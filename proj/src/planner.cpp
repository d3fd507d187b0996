#include "sela/reward.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <tuple>

namespace sela::reward {

PlannerGrid::PlannerGrid(Pose lower_corner, double cell_size, int width, int height)
    : lower_(lower_corner), cell_size_(cell_size), width_(width), height_(height)
{
    if (!(cell_size > 0.0) || width <= 0 || height <= 0)
        throw std::invalid_argument("PlannerGrid: cell size and extents must be positive");
}

PlannerGrid PlannerGrid::around(const Pose& start, const Pose& goal, double cell_size, int margin)
{
    if (!(cell_size > 0.0) || margin < 0)
        throw std::invalid_argument("PlannerGrid::around: bad cell size or margin");
    const Pose lo = start.cwiseMin(goal);
    const Pose hi = start.cwiseMax(goal);
    const Pose lower = lo - Pose::Constant((margin + 0.5) * cell_size);
    const auto span_cells = [&](double extent) {
        return static_cast<int>(std::ceil(extent / cell_size - 1e-9)) + 2 * margin + 1;
    };
    return PlannerGrid(lower, cell_size, span_cells(hi.x() - lo.x()), span_cells(hi.y() - lo.y()));
}

bool PlannerGrid::in_bounds(const Cell& c) const
{
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
}

void PlannerGrid::block(const Cell& c)
{
    if (!in_bounds(c))
        throw std::out_of_range("PlannerGrid::block: cell out of bounds");
    blocked_.insert(c);
}

Cell PlannerGrid::cell_of(const Pose& p) const
{
    const Pose rel = (p - lower_) / cell_size_;
    const auto clamp_axis = [](double v, int n) {
        return static_cast<int>(std::clamp(std::floor(v), 0.0, static_cast<double>(n - 1)));
    };
    return {clamp_axis(rel.x(), width_), clamp_axis(rel.y(), height_)};
}

Pose PlannerGrid::center(const Cell& c) const
{
    return lower_ + cell_size_ * Pose(c.x + 0.5, c.y + 0.5);
}

std::optional<std::vector<Cell>> astar(const PlannerGrid& grid, const Cell& start, const Cell& goal)
{
    if (!grid.in_bounds(start) || !grid.in_bounds(goal))
        throw std::out_of_range("astar: start or goal out of bounds");
    if (grid.blocked(start) || grid.blocked(goal))
        return std::nullopt;

    const int w = grid.width();
    const auto id = [w](const Cell& c) { return static_cast<std::size_t>(c.y) * w + c.x; };
    const auto manhattan = [&goal](const Cell& c) {
        return std::abs(c.x - goal.x) + std::abs(c.y - goal.y);
    };
    // Squared distance to the goal breaks (f, h) ties so the staircase stays
    // close to the straight line.
    const auto euclid2 = [&goal](const Cell& c) {
        const long dx = c.x - goal.x;
        const long dy = c.y - goal.y;
        return dx * dx + dy * dy;
    };

    using Entry = std::tuple<int, int, long, std::size_t, Cell>; // f, h, d2, order, cell
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
    std::vector<int> g_cost(n, -1);
    std::vector<bool> closed(n, false);
    std::vector<Cell> parent(n);

    std::size_t order = 0;
    g_cost[id(start)] = 0;
    open.emplace(manhattan(start), manhattan(start), euclid2(start), order++, start);

    static constexpr Cell moves[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    while (!open.empty()) {
        const Cell cur = std::get<4>(open.top());
        open.pop();
        if (closed[id(cur)])
            continue;
        closed[id(cur)] = true;
        if (cur == goal) {
            std::vector<Cell> path{cur};
            Cell c = cur;
            while (c != start) {
                c = parent[id(c)];
                path.push_back(c);
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (const Cell& m : moves) {
            const Cell next{cur.x + m.x, cur.y + m.y};
            if (!grid.in_bounds(next) || grid.blocked(next) || closed[id(next)])
                continue;
            const int g = g_cost[id(cur)] + 1;
            if (g_cost[id(next)] >= 0 && g_cost[id(next)] <= g)
                continue;
            g_cost[id(next)] = g;
            parent[id(next)] = cur;
            const int h = manhattan(next);
            open.emplace(g + h, h, euclid2(next), order++, next);
        }
    }
    return std::nullopt;
}

Pose select_waypoint(const PlannerGrid& grid, std::span<const Cell> path, const Pose& current,
                     int lookahead)
{
    if (path.empty())
        throw std::invalid_argument("select_waypoint: empty path");
    const Cell here = grid.cell_of(current);
    const auto it = std::find(path.begin(), path.end(), here);
    const std::size_t at = it == path.end() ? 0 : static_cast<std::size_t>(it - path.begin());
    const std::size_t ahead = std::min(at + static_cast<std::size_t>(std::max(lookahead, 0)),
                                       path.size() - 1);
    return grid.center(path[ahead]);
}

} // namespace sela::reward
