#include "sela/baselines.hpp"

#include <array>
#include <chrono>
#include <deque>
#include <limits>
#include <numeric>

namespace sela::mission {

namespace {

using Clock = std::chrono::steady_clock;

RunRecord finish(Method method, const MissionState& mission, int learn_steps,
                 const MethodParams& params, std::uint64_t seed, Clock::time_point started)
{
    RunRecord r;
    r.method = method;
    r.learn_steps = learn_steps;
    r.exec_steps = mission.step_count - learn_steps;
    r.total_steps = mission.step_count;
    r.reached = mission.at_goal(params.epsilon_goal);
    r.seed = seed;
    r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    return r;
}

/// Score for one constant task: the predicted outcome projected on a direction.
RewardFunction projection_reward(const Pose& direction)
{
    return {[direction](const GenericReward& g) { return g[0] * direction.x() + g[1] * direction.y(); },
            "projection"};
}

} // namespace

int learn_by_babbling(MissionState& mission, const Scenario& scenario, const MethodParams& params,
                      std::uint64_t seed)
{
    std::seed_seq seq{seed, std::uint64_t{0xBAB}};
    std::mt19937_64 rng(seq);
    std::deque<double> errors;
    int samples = 0;
    while (samples < params.babble_iterations && mission.step_count < params.step_cap) {
        const BehaviorPoint x = scenario.sample_behavior(rng);
        const gp::Prediction before = mission.model.predict(x);
        const GenericReward observed = mission.world.execute_behavior(x);
        mission.record_observation(x, observed);
        ++mission.step_count;
        ++samples;

        // held-out: each sample is scored by the model that had not seen it
        errors.push_back((observed - before.mean).norm());
        if (errors.size() > std::max<std::size_t>(params.drop.window, 1))
            errors.pop_front();
        const double mean_error =
            std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
        if (mean_error < params.epsilon_model)
            break;
    }
    return samples;
}

int learn_by_uncertainty(MissionState& mission, const Scenario& scenario, const MethodParams& params)
{
    const RewardFunction flat{[](const GenericReward&) { return 0.0; }, "zero"};
    const acquisition::AcquisitionConfig pure_sigma{1.0};
    int samples = 0;
    while (samples < params.uncertainty_iterations && mission.step_count < params.step_cap) {
        const auto next = acquisition::select_next(scenario.candidates, mission.model, flat, pure_sigma);
        const GenericReward observed = mission.world.execute_behavior(next.point);
        mission.record_observation(next.point, observed);
        ++mission.step_count;
        ++samples;
    }
    return samples;
}

RunRecord baseline_babbling(const Scenario& scenario, const MethodParams& params, std::uint64_t seed)
{
    const auto started = Clock::now();
    MissionState mission(scenario, params, seed);
    const int learned = learn_by_babbling(mission, scenario, params, seed);
    mission.world.set_pose(scenario.start);
    try {
        execute_greedy(mission, scenario, params);
    } catch (const reward::UnreachableGoal&) {
    }
    return finish(Method::Babbling, mission, learned, params, seed, started);
}

RunRecord baseline_uncertainty(const Scenario& scenario, const MethodParams& params,
                               std::uint64_t seed)
{
    const auto started = Clock::now();
    MissionState mission(scenario, params, seed);
    const int learned = learn_by_uncertainty(mission, scenario, params);
    mission.world.set_pose(scenario.start);
    try {
        execute_greedy(mission, scenario, params);
    } catch (const reward::UnreachableGoal&) {
    }
    return finish(Method::UncertaintySampling, mission, learned, params, seed, started);
}

RunRecord baseline_episodic_ite(const Scenario& scenario, const MethodParams& params,
                                std::uint64_t seed)
{
    const auto started = Clock::now();
    MissionState mission(scenario, params, seed);
    const std::array<Pose, 4> directions{Pose(1, 0), Pose(0, 1), Pose(-1, 0), Pose(0, -1)};

    std::vector<BehaviorPoint> learned;
    int learn_steps = 0;
    for (const Pose& direction : directions) {
        const RewardFunction task = projection_reward(direction);
        double best_projection = -std::numeric_limits<double>::infinity();
        BehaviorPoint best;
        for (int trial = 0; trial < params.max_iterations && mission.step_count < params.step_cap;
             ++trial) {
            const auto next =
                acquisition::select_next(scenario.candidates, mission.model, task, params.acquisition);
            mission.world.set_pose(scenario.start);
            const GenericReward observed = mission.world.execute_behavior(next.point);
            mission.world.set_pose(scenario.start);
            mission.record_observation(next.point, observed);
            ++mission.step_count;
            ++learn_steps;

            const double projection = task(observed);
            if (projection > best_projection) {
                best_projection = projection;
                best = next.point;
            }
            if (best_projection >= params.episodic_success)
                break;
        }
        if (best.size() > 0)
            learned.push_back(best);
    }

    std::vector<GenericReward> outcomes;
    for (const auto& x : learned)
        outcomes.push_back(mission.model.predict(x).mean);

    mission.world.set_pose(scenario.start);
    while (!outcomes.empty() && !mission.at_goal(params.epsilon_goal) &&
           mission.step_count < params.step_cap) {
        const Pose here = mission.world.pose();
        std::size_t pick = 0;
        double best_distance = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const double d = (here + Pose(outcomes[i][0], outcomes[i][1]) - mission.goal).norm();
            if (d < best_distance) {
                best_distance = d;
                pick = i;
            }
        }
        mission.world.execute_behavior(learned[pick]);
        ++mission.step_count;
    }
    return finish(Method::EpisodicIte, mission, learn_steps, params, seed, started);
}

RunRecord run_method(Method method, const Scenario& scenario, const MethodParams& params,
                     std::uint64_t seed)
{
    switch (method) {
    case Method::Sela:
        return run_mission(scenario, params, seed);
    case Method::Babbling:
        return baseline_babbling(scenario, params, seed);
    case Method::EpisodicIte:
        return baseline_episodic_ite(scenario, params, seed);
    case Method::UncertaintySampling:
        return baseline_uncertainty(scenario, params, seed);
    }
    throw std::invalid_argument("run_method: unknown method");
}

} // namespace sela::mission
