#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <variant>

#include "sela/map_elites.hpp"
#include "sela/types.hpp"

namespace sela::worlds {

enum class WorldKind { PointRobot, SegmentWalker };

inline constexpr double step_length = 0.1;
inline constexpr std::size_t walker_joints = 4;

/// Wraps to (-pi, pi].
double wrap_angle(double theta);

/// Intact point robot: a 0.1-long step in direction theta.
GenericReward point_robot_intact(double theta);

/// Intact segment walker: four unit leg vectors at angles pi * u_i, summed and
/// scaled by 0.025 so the longest possible step is 0.1.
GenericReward segment_walker_model(const BehaviorPoint& u);

std::size_t behavior_dim(WorldKind kind);
GenericReward intact_model(WorldKind kind, const BehaviorPoint& behavior);

struct NoDamage {};

/// Adds `offset` to the commanded direction whenever `applies(theta)` holds.
struct AngleOffset {
    double offset = 0.5;
    std::function<bool(double)> applies = [](double theta) { return theta > 0.0; };
};

/// Joint `index` is stuck at zero whatever it is commanded to.
struct FrozenJoint {
    std::size_t index = 0;
};

using DamageModel = std::variant<NoDamage, AngleOffset, FrozenJoint>;

BehaviorPoint apply_damage(const DamageModel& damage, const BehaviorPoint& behavior);

struct NoiseModel {
    double variance = 0.0; // per-axis Gaussian variance on observed displacement
};

/// A simulated robot with a seeded observation-noise stream. The pose
/// integrates true displacements; noise only touches the returned observation.
class World {
public:
    World(WorldKind kind, DamageModel damage, NoiseModel noise, Pose start, std::uint64_t seed);

    /// Runs one atomic behavior and returns the observed generic reward.
    GenericReward execute_behavior(const BehaviorPoint& behavior);

    /// Noise-free outcome under the current damage, without moving.
    GenericReward true_outcome(const BehaviorPoint& behavior) const;

    WorldKind kind() const { return kind_; }
    const DamageModel& damage() const { return damage_; }
    const Pose& pose() const { return pose_; }
    void set_pose(const Pose& pose) { pose_ = pose; }

private:
    WorldKind kind_;
    DamageModel damage_;
    NoiseModel noise_;
    Pose pose_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Walker map features: (heading of the displacement mapped to [0, 1],
/// displacement length / 0.1). Performance is the displacement length.
map_elites::Descriptor walker_descriptor(const GenericReward& displacement);
map_elites::Evaluation segment_walker_evaluation(const BehaviorPoint& u);

bool goal_reached(const Pose& pose, const Pose& goal, double epsilon_goal);

} // namespace sela::worlds
