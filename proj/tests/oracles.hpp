#pragma once

// Independent reference implementations used only by the tests.

#include <deque>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sela/gp.hpp"
#include "sela/reward.hpp"

namespace sela::testing {

struct BruteForcePrediction {
    Eigen::VectorXd mean;
    double variance;
};

/// GP posterior with an explicit inverse of K, assembled straight from the
/// textbook formulas.
inline BruteForcePrediction brute_force_predict(const gp::ObservationSet& obs, const gp::Kernel& kernel,
                                                const gp::PriorMean& prior, const BehaviorPoint& x)
{
    const auto t = static_cast<Eigen::Index>(obs.size());
    BruteForcePrediction out{prior(x), kernel(x, x)};
    if (t == 0)
        return out;
    Eigen::MatrixXd K(t, t);
    Eigen::VectorXd k(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        k[i] = kernel(x, obs.inputs()[i]);
        for (Eigen::Index j = 0; j < t; ++j)
            K(i, j) = kernel(obs.inputs()[i], obs.inputs()[j]);
    }
    K += obs.noise_variance() * Eigen::MatrixXd::Identity(t, t);
    const Eigen::MatrixXd Kinv = K.inverse();
    for (Eigen::Index dim = 0; dim < out.mean.size(); ++dim) {
        Eigen::VectorXd r(t);
        for (Eigen::Index i = 0; i < t; ++i)
            r[i] = obs.outputs()[i][dim] - prior(obs.inputs()[i])[dim];
        out.mean[dim] += k.dot(Kinv * r);
    }
    out.variance -= k.dot(Kinv * k);
    return out;
}

/// Plain breadth-first search; returns the number of cells on a shortest
/// 4-connected path (moves + 1) or nullopt.
inline std::optional<int> bfs_path_cells(const reward::PlannerGrid& grid, reward::Cell start,
                                         reward::Cell goal)
{
    if (grid.blocked(start) || grid.blocked(goal))
        return std::nullopt;
    std::vector<int> dist(static_cast<std::size_t>(grid.width() * grid.height()), -1);
    auto id = [&](reward::Cell c) { return static_cast<std::size_t>(c.y * grid.width() + c.x); };
    std::deque<reward::Cell> q{start};
    dist[id(start)] = 0;
    while (!q.empty()) {
        auto c = q.front();
        q.pop_front();
        if (c == goal)
            return dist[id(c)] + 1;
        for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            reward::Cell n{c.x + dx, c.y + dy};
            if (!grid.in_bounds(n) || grid.blocked(n) || dist[id(n)] >= 0)
                continue;
            dist[id(n)] = dist[id(c)] + 1;
            q.push_back(n);
        }
    }
    return std::nullopt;
}

/// |a - b| / |reference|, with the reference floored at 1e-6.
inline double relative_error(double a, double reference)
{
    return std::abs(a - reference) / std::max(std::abs(reference), 1e-6);
}

} // namespace sela::testing
