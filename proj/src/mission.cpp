#include "sela/mission.hpp"

#include <chrono>
#include <utility>

namespace sela::mission {

namespace {

constexpr std::pair<Method, std::string_view> method_names[] = {
    {Method::Sela, "sela"},
    {Method::Babbling, "babbling"},
    {Method::EpisodicIte, "episodic_ite"},
    {Method::UncertaintySampling, "uncertainty"},
};

} // namespace

std::string_view method_name(Method method)
{
    for (const auto& [m, name] : method_names)
        if (m == method)
            return name;
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (const auto& [m, n] : method_names)
        if (n == name)
            return m;
    return std::nullopt;
}

bool detect_drop(std::span<const PredictionRecord> recent, const DropDetectorConfig& config)
{
    if (recent.empty() || config.window == 0)
        return false;
    const std::size_t n = std::min(config.window, recent.size());
    double sum = 0.0;
    for (const auto& r : recent.last(n))
        sum += (r.observed - r.predicted).norm();
    return sum / static_cast<double>(n) > config.threshold;
}

MissionState::MissionState(const Scenario& scenario, const MethodParams& params, std::uint64_t seed)
    : world(scenario.world, scenario.damage, scenario.noise, scenario.start, seed),
      goal(scenario.goal),
      observations(2, params.gp_noise),
      model(gp::GpModel::fit(observations, params.kernel, scenario.prior)),
      grid(reward::PlannerGrid::around(scenario.start, scenario.goal, params.rsl.cell_size,
                                       params.rsl.margin_cells))
{
}

void MissionState::record_observation(const BehaviorPoint& x, const GenericReward& y)
{
    observations.add(x, y);
    model = gp::GpModel::fit(observations, model.kernel(), model.prior());
}

bool MissionState::at_goal(double epsilon_goal) const
{
    return worlds::goal_reached(world.pose(), goal, epsilon_goal);
}

AdaptStop sela_adapt(MissionState& mission, const Scenario& scenario, const MethodParams& params)
{
    for (int iteration = 0;; ++iteration) {
        if (mission.at_goal(params.epsilon_goal))
            return AdaptStop::GoalReached;
        if (iteration >= params.max_iterations)
            return AdaptStop::IterationCap;
        if (mission.step_count >= params.step_cap)
            return AdaptStop::StepCap;

        const RewardFunction reward = reward::rsl_update(
            mission.world.pose(), mission.goal, mission.grid, params.rsl.lookahead_cells);
        const auto next =
            acquisition::select_next(scenario.candidates, mission.model, reward, params.acquisition);
        const GenericReward observed = mission.world.execute_behavior(next.point);
        mission.history.push_back({next.prediction.mean, observed});
        mission.record_observation(next.point, observed);
        ++mission.step_count;
        ++mission.adapt_iterations;

        if (!detect_drop(mission.history, params.drop))
            return AdaptStop::Recovered;
    }
}

int execute_greedy(MissionState& mission, const Scenario& scenario, const MethodParams& params)
{
    const acquisition::AcquisitionConfig greedy{0.0};
    int steps = 0;
    while (!mission.at_goal(params.epsilon_goal) && mission.step_count < params.step_cap) {
        const RewardFunction reward = reward::rsl_update(
            mission.world.pose(), mission.goal, mission.grid, params.rsl.lookahead_cells);
        const auto next = acquisition::select_next(scenario.candidates, mission.model, reward, greedy);
        const GenericReward observed = mission.world.execute_behavior(next.point);
        mission.history.push_back({next.prediction.mean, observed});
        ++mission.step_count;
        ++steps;
    }
    return steps;
}

RunRecord run_mission(const Scenario& scenario, const MethodParams& params, std::uint64_t seed)
{
    const auto started = std::chrono::steady_clock::now();
    MissionState mission(scenario, params, seed);
    const acquisition::AcquisitionConfig greedy{0.0};

    try {
        while (!mission.at_goal(params.epsilon_goal) && mission.step_count < params.step_cap) {
            const RewardFunction reward = reward::rsl_update(
                mission.world.pose(), mission.goal, mission.grid, params.rsl.lookahead_cells);
            const auto next =
                acquisition::select_next(scenario.candidates, mission.model, reward, greedy);
            const GenericReward observed = mission.world.execute_behavior(next.point);
            mission.history.push_back({next.prediction.mean, observed});
            ++mission.step_count;

            if (!mission.at_goal(params.epsilon_goal) && detect_drop(mission.history, params.drop)) {
                mission.phase = Phase::Adapting;
                sela_adapt(mission, scenario, params);
                mission.phase = Phase::Nominal;
            }
        }
    } catch (const reward::UnreachableGoal&) {
        // mission failure: reported through `reached`
    }

    RunRecord record;
    record.method = Method::Sela;
    record.learn_steps = mission.adapt_iterations;
    record.exec_steps = mission.step_count - mission.adapt_iterations;
    record.total_steps = mission.step_count;
    record.reached = mission.at_goal(params.epsilon_goal);
    record.seed = seed;
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    return record;
}

} // namespace sela::mission
