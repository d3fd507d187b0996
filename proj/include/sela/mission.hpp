#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sela/acquisition.hpp"
#include "sela/gp.hpp"
#include "sela/reward.hpp"
#include "sela/types.hpp"
#include "sela/worlds.hpp"

namespace sela::mission {

enum class Method { Sela, Babbling, EpisodicIte, UncertaintySampling };

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

enum class Phase { Nominal, Adapting };

struct DropDetectorConfig {
    std::size_t window = 3;
    double threshold = 0.15; // mean prediction-error norm
};

struct PredictionRecord {
    GenericReward predicted;
    GenericReward observed;
};

/// True iff the mean of ||observed - predicted|| over the last `window`
/// records (or all of them, if fewer) exceeds the threshold.
bool detect_drop(std::span<const PredictionRecord> recent, const DropDetectorConfig& config);

/// Everything a method needs to know about one experimental condition.
struct Scenario {
    worlds::WorldKind world = worlds::WorldKind::PointRobot;
    worlds::DamageModel damage;
    worlds::NoiseModel noise;
    Pose start = Pose::Zero();
    Pose goal{2.0, 2.0};
    acquisition::CandidateSet candidates;
    gp::PriorMean prior;
    /// Draws one behavior for random babbling.
    std::function<BehaviorPoint(std::mt19937_64&)> sample_behavior;
};

struct MethodParams {
    acquisition::AcquisitionConfig acquisition;
    gp::Kernel kernel;
    double gp_noise = 0.001;
    double epsilon_goal = 0.1;
    int max_iterations = 10;        // SELA-ADAPT and per-direction episodic cap
    int babble_iterations = 15;
    double epsilon_model = 0.01;
    int uncertainty_iterations = 15;
    double episodic_success = 0.09; // projected displacement that ends a direction early
    DropDetectorConfig drop;
    reward::RslConfig rsl;
    int step_cap = 300;             // learning plus execution
};

struct RunRecord {
    Method method = Method::Sela;
    int learn_steps = 0;
    int exec_steps = 0;
    int total_steps = 0;
    bool reached = false;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

/// Mutable state of one mission: the robot, its data set and its model.
struct MissionState {
    MissionState(const Scenario& scenario, const MethodParams& params, std::uint64_t seed);

    /// Appends to D and refits the GPs.
    void record_observation(const BehaviorPoint& x, const GenericReward& y);

    bool at_goal(double epsilon_goal) const;

    worlds::World world;
    Pose goal;
    gp::ObservationSet observations;
    gp::GpModel model;
    reward::PlannerGrid grid;
    std::vector<PredictionRecord> history;
    int step_count = 0;
    int adapt_iterations = 0;
    Phase phase = Phase::Nominal;
};

enum class AdaptStop { GoalReached, IterationCap, Recovered, StepCap };

/// SELA-ADAPT. Each iteration retargets the reward from the current pose,
/// picks the UCB argmax, executes it (moving the robot), records the outcome
/// and refits. Throws reward::UnreachableGoal if planning fails.
AdaptStop sela_adapt(MissionState& mission, const Scenario& scenario, const MethodParams& params);

/// The full semi-episodic mission: greedy on the current model until a drop is
/// detected, then adapt, and repeat until the goal or the step cap.
RunRecord run_mission(const Scenario& scenario, const MethodParams& params, std::uint64_t seed);

/// Greedy execution on the current model without learning, from the current
/// pose until the goal or the step cap. Returns the number of steps taken.
int execute_greedy(MissionState& mission, const Scenario& scenario, const MethodParams& params);

} // namespace sela::mission
