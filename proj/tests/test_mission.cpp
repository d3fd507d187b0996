#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scenarios.hpp"
#include "sela/mission.hpp"

using namespace sela;
using namespace sela::mission;

namespace {

std::vector<PredictionRecord> records_with_errors(std::initializer_list<double> errors)
{
    std::vector<PredictionRecord> out;
    for (double e : errors)
        out.push_back({Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(e, 0.0)});
    return out;
}

} // namespace

TEST_CASE("method names")
{
    for (auto m : {Method::Sela, Method::Babbling, Method::EpisodicIte, Method::UncertaintySampling})
        CHECK(parse_method(method_name(m)) == m);
    CHECK_FALSE(parse_method("sela2"));
}

TEST_CASE("detect_drop")
{
    const DropDetectorConfig cfg{3, 0.15};
    CHECK_FALSE(detect_drop(records_with_errors({0.0, 0.0, 0.0, 0.0}), cfg));
    CHECK(detect_drop(records_with_errors({0.2, 0.2, 0.2}), cfg));
    CHECK_FALSE(detect_drop(records_with_errors({0.2, 0.0, 0.0}), cfg));
    // only the last window counts
    CHECK_FALSE(detect_drop(records_with_errors({0.9, 0.9, 0.0, 0.1, 0.1}), cfg));
    CHECK(detect_drop(records_with_errors({0.0, 0.0, 0.5, 0.0, 0.0}), {5, 0.09}));
    // fewer records than the window: mean over what exists
    CHECK(detect_drop(records_with_errors({0.2}), cfg));
}

TEST_CASE("geometric optimum")
{
    CHECK(testing::geometric_optimum(2.0 * std::sqrt(2.0), 0.1) == 28);
}

TEST_CASE("run_mission without damage walks straight to the goal")
{
    const auto scenario = testing::toy_scenario(worlds::NoDamage{}, 0.0);
    const auto params = testing::toy_params();
    const auto r = run_mission(scenario, params, 1);
    CHECK(r.reached);
    CHECK(r.total_steps == testing::geometric_optimum(2.0 * std::sqrt(2.0), 0.1));
    CHECK(r.learn_steps == 0);
    CHECK(r.exec_steps == r.total_steps);
}

TEST_CASE("exact damaged prior: greedy optimal under damage")
{
    auto scenario = testing::toy_scenario(worlds::AngleOffset{0.5}, 0.0);
    const worlds::DamageModel damage = worlds::AngleOffset{0.5};
    scenario.prior = [damage](const BehaviorPoint& x) {
        return worlds::point_robot_intact(worlds::apply_damage(damage, x)[0]);
    };
    auto params = testing::toy_params();

    SUBCASE("full mission")
    {
        const auto r = run_mission(scenario, params, 3);
        CHECK(r.reached);
        CHECK(r.total_steps == 28);
        CHECK(r.learn_steps == 0);
    }
    SUBCASE("adaptation alone, without the exploration bonus")
    {
        params.acquisition.alpha = 0.0;
        params.max_iterations = 1000;
        params.drop.threshold = -1.0; // never counts as recovered
        MissionState m(scenario, params, 3);
        m.phase = Phase::Adapting;
        CHECK(sela_adapt(m, scenario, params) == AdaptStop::GoalReached);
        CHECK(m.adapt_iterations == 28);
        CHECK(m.step_count == 28);
    }
    SUBCASE("adaptation alone, default bonus: close to optimal")
    {
        params.max_iterations = 1000;
        params.drop.threshold = -1.0;
        MissionState m(scenario, params, 3);
        CHECK(sela_adapt(m, scenario, params) == AdaptStop::GoalReached);
        CHECK(m.step_count >= 28);
        CHECK(m.step_count <= 42);
    }
}

TEST_CASE("sela_adapt")
{
    const auto params = testing::toy_params();

    SUBCASE("correct model: recovered after one iteration")
    {
        const auto scenario = testing::toy_scenario(worlds::NoDamage{}, 0.0);
        MissionState m(scenario, params, 1);
        m.phase = Phase::Adapting;
        CHECK(sela_adapt(m, scenario, params) == AdaptStop::Recovered);
        CHECK(m.adapt_iterations == 1);
        CHECK(m.step_count == 1);
        CHECK(m.world.pose().norm() == doctest::Approx(0.1));
        CHECK(m.world.pose().x() == doctest::Approx(m.world.pose().y()));
    }

    SUBCASE("every iteration adds one observation and moves the robot")
    {
        const auto scenario = testing::toy_scenario(worlds::AngleOffset{0.5}, 0.01);
        auto p = params;
        p.drop.threshold = 1e-9;
        MissionState m(scenario, p, 7);
        m.phase = Phase::Adapting;
        CHECK(sela_adapt(m, scenario, p) == AdaptStop::IterationCap);
        CHECK(m.adapt_iterations == p.max_iterations);
        CHECK(m.observations.size() == static_cast<std::size_t>(p.max_iterations));
        CHECK(m.model.size() == m.observations.size());
        CHECK(m.world.pose().norm() > 0.3);
    }

    SUBCASE("unreachable goal surfaces as a planner failure")
    {
        const auto scenario = testing::toy_scenario(worlds::NoDamage{}, 0.0);
        MissionState m(scenario, params, 1);
        for (int x = 0; x < m.grid.width(); ++x)
            m.grid.block({x, 15});
        CHECK_THROWS_AS(sela_adapt(m, scenario, params), reward::UnreachableGoal);
    }
}

TEST_CASE("GP state depends on behaviors and outcomes only, not on the task")
{
    const auto scenario = testing::toy_scenario(worlds::AngleOffset{0.5}, 0.01);
    auto other = scenario;
    other.goal = Pose(-1.0, 3.0);
    const auto params = testing::toy_params();
    MissionState a(scenario, params, 17);
    MissionState b(other, params, 17);
    for (double theta : {0.3, -2.0, 1.4, 0.31, 3.0}) {
        const BehaviorPoint x = BehaviorPoint::Constant(1, theta);
        a.record_observation(x, a.world.execute_behavior(x));
        b.record_observation(x, b.world.execute_behavior(x));
    }
    for (std::size_t i = 0; i < scenario.candidates.size(); i += 7) {
        const auto pa = a.model.predict(scenario.candidates[i]);
        const auto pb = b.model.predict(scenario.candidates[i]);
        CHECK(pa.mean == pb.mean);
        CHECK(pa.variance == pb.variance);
    }
}

TEST_CASE("step cap ends a hopeless mission")
{
    // every reachable command points away from the goal
    std::vector<BehaviorPoint> pts;
    for (int i = 0; i <= 18; ++i)
        pts.push_back(BehaviorPoint::Constant(1, i * std::numbers::pi / 36.0));
    auto scenario = testing::toy_scenario(
        worlds::AngleOffset{std::numbers::pi, [](double) { return true; }}, 0.0);
    scenario.candidates = acquisition::CandidateSet(pts, acquisition::CandidateSource::DenseGrid);
    auto params = testing::toy_params();
    params.step_cap = 80;
    const auto r = run_mission(scenario, params, 1);
    CHECK_FALSE(r.reached);
    CHECK(r.total_steps == 80);
    CHECK(r.learn_steps + r.exec_steps == r.total_steps);
}

TEST_CASE("offset damage with noise, a handful of seeds")
{
    const auto scenario = testing::toy_scenario(worlds::AngleOffset{0.5}, 0.01);
    const auto params = testing::toy_params();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto r = run_mission(scenario, params, seed);
        CHECK(r.reached);
        CHECK(r.total_steps <= params.step_cap);
        CHECK(r.total_steps >= 28);
        // determinism
        const auto again = run_mission(scenario, params, seed);
        CHECK(again.total_steps == r.total_steps);
        CHECK(again.learn_steps == r.learn_steps);
    }
}
