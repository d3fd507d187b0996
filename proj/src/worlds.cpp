#include "sela/worlds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "sela/reward.hpp"

namespace sela::worlds {

double wrap_angle(double theta)
{
    constexpr double pi = std::numbers::pi;
    double w = std::fmod(theta + pi, 2.0 * pi);
    if (w <= 0.0)
        w += 2.0 * pi;
    return w - pi;
}

GenericReward point_robot_intact(double theta)
{
    GenericReward g(2);
    g << step_length * std::cos(theta), step_length * std::sin(theta);
    return g;
}

GenericReward segment_walker_model(const BehaviorPoint& u)
{
    if (static_cast<std::size_t>(u.size()) != walker_joints)
        throw std::invalid_argument("segment_walker_model: expected 4 joint offsets");
    constexpr double leg = step_length / static_cast<double>(walker_joints);
    GenericReward g = GenericReward::Zero(2);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        g[0] += leg * std::cos(std::numbers::pi * u[i]);
        g[1] += leg * std::sin(std::numbers::pi * u[i]);
    }
    return g;
}

std::size_t behavior_dim(WorldKind kind)
{
    return kind == WorldKind::PointRobot ? 1 : walker_joints;
}

GenericReward intact_model(WorldKind kind, const BehaviorPoint& behavior)
{
    if (kind == WorldKind::PointRobot) {
        if (behavior.size() != 1)
            throw std::invalid_argument("point robot: behavior must be one angle");
        return point_robot_intact(behavior[0]);
    }
    return segment_walker_model(behavior);
}

BehaviorPoint apply_damage(const DamageModel& damage, const BehaviorPoint& behavior)
{
    BehaviorPoint out = behavior;
    if (const auto* offset = std::get_if<AngleOffset>(&damage)) {
        if (behavior.size() != 1)
            throw std::invalid_argument("AngleOffset damage needs a one-angle behavior");
        if (offset->applies(behavior[0]))
            out[0] = wrap_angle(behavior[0] + offset->offset);
    } else if (const auto* frozen = std::get_if<FrozenJoint>(&damage)) {
        if (frozen->index >= static_cast<std::size_t>(behavior.size()))
            throw std::invalid_argument("FrozenJoint index out of range");
        out[static_cast<Eigen::Index>(frozen->index)] = 0.0;
    }
    return out;
}

World::World(WorldKind kind, DamageModel damage, NoiseModel noise, Pose start, std::uint64_t seed)
    : kind_(kind), damage_(std::move(damage)), noise_(noise), pose_(start), rng_(seed)
{
    if (!(noise.variance >= 0.0))
        throw std::invalid_argument("World: noise variance must be >= 0");
    if (const auto* frozen = std::get_if<FrozenJoint>(&damage_);
        frozen && frozen->index >= behavior_dim(kind))
        throw std::invalid_argument("World: frozen joint index out of range");
    if (std::holds_alternative<AngleOffset>(damage_) && kind != WorldKind::PointRobot)
        throw std::invalid_argument("World: angle-offset damage applies to the point robot only");
}

GenericReward World::true_outcome(const BehaviorPoint& behavior) const
{
    return intact_model(kind_, apply_damage(damage_, behavior));
}

GenericReward World::execute_behavior(const BehaviorPoint& behavior)
{
    const Pose before = pose_;
    const GenericReward moved = true_outcome(behavior);
    pose_ += Pose(moved[0], moved[1]);
    GenericReward observed = reward::displacement_aggregator(before, pose_);
    if (noise_.variance > 0.0) {
        const double sd = std::sqrt(noise_.variance);
        for (Eigen::Index i = 0; i < observed.size(); ++i)
            observed[i] += sd * gauss_(rng_);
    }
    return observed;
}

map_elites::Descriptor walker_descriptor(const GenericReward& displacement)
{
    constexpr double pi = std::numbers::pi;
    map_elites::Descriptor d(2);
    d[0] = (std::atan2(displacement[1], displacement[0]) + pi) / (2.0 * pi);
    d[1] = displacement.norm() / step_length;
    return d.cwiseMax(0.0).cwiseMin(1.0);
}

map_elites::Evaluation segment_walker_evaluation(const BehaviorPoint& u)
{
    GenericReward g = segment_walker_model(u);
    return {walker_descriptor(g), g.norm(), std::move(g)};
}

bool goal_reached(const Pose& pose, const Pose& goal, double epsilon_goal)
{
    return (pose - goal).norm() <= epsilon_goal;
}

} // namespace sela::worlds
