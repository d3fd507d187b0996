#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace sela {

/// A point in behavior space: the GP input. One angle for the point robot,
/// four joint offsets for the segment walker.
using BehaviorPoint = Eigen::VectorXd;

/// Task-independent outcome of one atomic behavior (here the relative
/// displacement (dx, dy)).
using GenericReward = Eigen::VectorXd;

using Pose = Eigen::Vector2d;

/// Maps a predicted generic reward to a task score; higher is better.
struct RewardFunction {
    std::function<double(const GenericReward&)> eval;
    std::string description;

    double operator()(const GenericReward& g) const { return eval(g); }
};

} // namespace sela
