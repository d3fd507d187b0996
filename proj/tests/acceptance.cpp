// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "sela/baselines.hpp"
#include "sela/experiment.hpp"
#include "sela/gp.hpp"
#include "sela/map_elites.hpp"
#include "sela/mission.hpp"
#include "sela/reward.hpp"
#include "sela/worlds.hpp"

using namespace sela;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty())
                detail += "; ";
            detail += what;
        }
    }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0.0 && secs >= limit_s)
        out.require(false, "took longer than " + std::to_string(limit_s) + " s");
    if (!out.pass)
        ++failures;
    std::printf("[%s] %2d %-28s %8.3f s  %s\n", out.pass ? "PASS" : "FAIL", id, name, secs,
                out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v)
{
    std::ostringstream s;
    s << v;
    return s.str();
}

struct RandomGp {
    gp::ObservationSet obs;
    gp::Kernel kernel;
    gp::PriorMean prior;
    std::size_t input_dim;
};

RandomGp random_gp(std::mt19937_64& rng, std::size_t t)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> dim_pick(1, 3);
    const auto n = static_cast<std::size_t>(dim_pick(rng));
    gp::Kernel kernel;
    kernel.sigma = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
    if (rng() % 2)
        kernel.family = gp::KernelFamily::Exponential;
    if (n == 1 && rng() % 2)
        kernel.distance = gp::DistanceKind::WrappedAngular;
    const double noise = std::uniform_real_distribution<double>(0.001, 0.1)(rng);
    const double a = u(rng), b = u(rng);
    gp::PriorMean prior = [a, b](const BehaviorPoint& x) {
        return Eigen::Vector2d(a * std::cos(x[0]), b * x.sum());
    };
    gp::ObservationSet obs(2, noise);
    for (std::size_t i = 0; i < t; ++i) {
        BehaviorPoint x(static_cast<Eigen::Index>(n));
        for (auto& v : x)
            v = u(rng);
        obs.add(x, Eigen::Vector2d(u(rng), u(rng)));
    }
    return {std::move(obs), kernel, prior, n};
}

BehaviorPoint random_query(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    BehaviorPoint x(static_cast<Eigen::Index>(n));
    for (auto& v : x)
        v = u(rng);
    return x;
}

Outcome gp_exactness()
{
    Outcome out;
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto t = static_cast<std::size_t>(trial % 6);
        const auto g = random_gp(rng, t);
        const auto model = gp::GpModel::fit(g.obs, g.kernel, g.prior);
        for (int q = 0; q < 10; ++q) {
            const auto x = random_query(rng, g.input_dim);
            const auto p = model.predict(x);
            const auto o = testing::brute_force_predict(g.obs, g.kernel, g.prior, x);
            for (Eigen::Index d = 0; d < 2; ++d)
                worst = std::max(worst, testing::relative_error(p.mean[d], o.mean[d]));
            worst = std::max(worst, testing::relative_error(p.variance, o.variance));
        }
    }
    out.require(worst <= 1e-9, "relative error " + fmt(worst));
    out.detail = out.pass ? "worst relative error " + fmt(worst) : out.detail;
    return out;
}

Outcome prior_recovery()
{
    Outcome out;
    std::mt19937_64 rng(202);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        auto g = random_gp(rng, 0);
        const auto model = gp::GpModel::fit(g.obs, g.kernel, g.prior);
        const auto x = random_query(rng, g.input_dim);
        const auto p = model.predict(x);
        if (p.mean != g.prior(x) || p.variance != 1.0)
            ++mismatches;
    }
    out.require(mismatches == 0, std::to_string(mismatches) + " of 1000 differ");
    if (out.pass)
        out.detail = "1000 queries exact";
    return out;
}

Outcome mboa_decomposition()
{
    Outcome out;
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_gp(rng, 1 + static_cast<std::size_t>(trial % 8));
        gp::ObservationSet residuals(2, g.obs.noise_variance());
        for (std::size_t i = 0; i < g.obs.size(); ++i)
            residuals.add(g.obs.inputs()[i], g.obs.outputs()[i] - g.prior(g.obs.inputs()[i]));
        const auto with_prior = gp::GpModel::fit(g.obs, g.kernel, g.prior);
        const auto residual = gp::GpModel::fit(residuals, g.kernel, gp::zero_prior(2));
        for (int q = 0; q < 10; ++q) {
            const auto x = random_query(rng, g.input_dim);
            const auto a = with_prior.predict(x);
            const auto b = residual.predict(x);
            const Eigen::VectorXd combined = g.prior(x) + b.mean;
            for (Eigen::Index d = 0; d < 2; ++d)
                worst = std::max(worst, testing::relative_error(a.mean[d], combined[d]));
            worst = std::max(worst, testing::relative_error(a.variance, b.variance));
        }
    }
    out.require(worst <= 1e-9, "relative error " + fmt(worst));
    if (out.pass)
        out.detail = "worst relative error " + fmt(worst);
    return out;
}

Outcome astar_optimality()
{
    Outcome out;
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<int> coord(0, 19);
    int compared = 0, mismatches = 0;
    for (int g = 0; g < 200; ++g) {
        reward::PlannerGrid grid(Pose::Zero(), 1.0, 20, 20);
        std::vector<reward::Cell> cells;
        for (int y = 0; y < 20; ++y)
            for (int x = 0; x < 20; ++x)
                cells.push_back({x, y});
        std::shuffle(cells.begin(), cells.end(), rng);
        for (std::size_t i = 0; i < 80; ++i)
            grid.block(cells[i]);
        const reward::Cell start{coord(rng), coord(rng)};
        const reward::Cell goal{coord(rng), coord(rng)};
        const auto path = reward::astar(grid, start, goal);
        const auto oracle = testing::bfs_path_cells(grid, start, goal);
        ++compared;
        if (path.has_value() != oracle.has_value() ||
            (path && static_cast<int>(path->size()) != *oracle))
            ++mismatches;
    }
    out.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    if (out.pass)
        out.detail = std::to_string(compared) + " grids match";
    return out;
}

Outcome map_elites_elitism()
{
    Outcome out;
    config::ExperimentConfig c;
    c.world = worlds::WorldKind::SegmentWalker;
    const auto cfg = experiment::illuminate_config(c);

    std::map<map_elites::CellIndex, map_elites::Elite> tracker;
    std::vector<std::size_t> checkpoints;
    std::size_t offers = 0;
    bool results_consistent = true;
    const auto archive = map_elites::illuminate(
        worlds::segment_walker_evaluation, cfg,
        [&](std::size_t, const map_elites::Elite& e, map_elites::OfferResult result) {
            const auto cell = map_elites::bin(e.descriptor, cfg.grid_shape);
            auto it = tracker.find(cell);
            map_elites::OfferResult expected = map_elites::OfferResult::Rejected;
            if (it == tracker.end()) {
                tracker.emplace(cell, e);
                expected = map_elites::OfferResult::Inserted;
            } else if (e.performance > it->second.performance) {
                it->second = e;
                expected = map_elites::OfferResult::Replaced;
            }
            results_consistent = results_consistent && expected == result;
            if (++offers % 1000 == 0)
                checkpoints.push_back(tracker.size());
        });

    out.require(offers == 50000, "offers " + std::to_string(offers));
    out.require(results_consistent, "offer results disagree with the tracker");
    bool same = archive.size() == tracker.size();
    for (const auto& [cell, elite] : tracker) {
        const auto* a = archive.find(cell);
        same = same && a && a->behavior == elite.behavior && a->performance == elite.performance &&
               a->descriptor == elite.descriptor && a->outcome == elite.outcome;
    }
    out.require(same, "archive differs from the brute-force tracker");
    out.require(std::is_sorted(checkpoints.begin(), checkpoints.end()), "coverage decreased");
    if (out.pass)
        out.detail = "50000 offers replayed, " + std::to_string(archive.size()) + "/" +
                     std::to_string(archive.total_cells()) + " cells";
    return out;
}

Outcome geometric_oracle()
{
    Outcome out;
    const auto params = testing::toy_params();
    const int optimum = testing::geometric_optimum(2.0 * std::sqrt(2.0), 0.1);
    out.require(optimum == 28, "optimum " + std::to_string(optimum));

    const auto intact = testing::toy_scenario(worlds::NoDamage{}, 0.0);
    const auto a = mission::run_mission(intact, params, 1);
    out.require(a.reached && a.total_steps == 28,
                "undamaged run took " + std::to_string(a.total_steps));

    auto damaged = testing::toy_scenario(worlds::AngleOffset{0.5}, 0.0);
    const worlds::DamageModel damage = worlds::AngleOffset{0.5};
    damaged.prior = [damage](const BehaviorPoint& x) {
        return worlds::point_robot_intact(worlds::apply_damage(damage, x)[0]);
    };
    const auto b = mission::run_mission(damaged, params, 1);
    out.require(b.reached && b.total_steps == 28,
                "damaged run with exact prior took " + std::to_string(b.total_steps));
    if (out.pass)
        out.detail = "28 steps with and without damage";
    return out;
}

const experiment::MethodSummary* find_summary(const experiment::SummaryStats& stats,
                                              mission::Method m)
{
    for (const auto& s : stats)
        if (s.method == m)
            return &s;
    return nullptr;
}

config::ExperimentConfig toy_config()
{
    return config::parse_config("world = point_robot\ndamage = angle_offset\n"
                                "noise_variance = 0.01\ngoal = 2, 2\nreplicates = 50\n"
                                "methods = sela, babbling, episodic_ite\n");
}

config::ExperimentConfig walker_config()
{
    return config::parse_config("world = segment_walker\ndamage = frozen_joint\nreplicates = 50\n"
                                "archive_budget = 50000\n"
                                "methods = sela, uncertainty, episodic_ite\n");
}

experiment::ExperimentResult toy_result;
experiment::ExperimentResult walker_result;
std::optional<map_elites::Archive> walker_archive;

Outcome toy_reproduction()
{
    Outcome out;
    toy_result = experiment::run_experiment(toy_config(), nullptr);
    const auto* sela = find_summary(toy_result.summary, mission::Method::Sela);
    const auto* babbling = find_summary(toy_result.summary, mission::Method::Babbling);
    const auto* episodic = find_summary(toy_result.summary, mission::Method::EpisodicIte);
    if (!sela || !babbling || !episodic) {
        out.require(false, "missing method");
        return out;
    }
    out.require(sela->runs == 50, "replicates");
    out.require(sela->success_rate >= 0.95, "SELA success " + fmt(sela->success_rate));
    out.require(sela->total.median < babbling->total.median, "SELA median not below babbling");
    out.require(sela->total.median < episodic->total.median, "SELA median not below episodic");
    out.require(sela->total.median <= 1.5 * 28, "SELA median above 42");
    if (out.pass)
        out.detail = "median total SELA " + fmt(sela->total.median) + " (success " +
                     fmt(sela->success_rate) + "), babbling " + fmt(babbling->total.median) +
                     ", episodic " + fmt(episodic->total.median);
    return out;
}

Outcome walker_reproduction()
{
    Outcome out;
    const auto cfg = walker_config();
    walker_archive = experiment::build_archive(cfg);
    walker_result = experiment::run_experiment(cfg, &*walker_archive);
    const auto* sela = find_summary(walker_result.summary, mission::Method::Sela);
    const auto* unc = find_summary(walker_result.summary, mission::Method::UncertaintySampling);
    const auto* episodic = find_summary(walker_result.summary, mission::Method::EpisodicIte);
    if (!sela || !unc || !episodic) {
        out.require(false, "missing method");
        return out;
    }
    out.require(sela->success_rate >= 0.90, "SELA success " + fmt(sela->success_rate));
    out.require(sela->total.median < unc->total.median, "SELA median not below uncertainty");
    out.require(sela->total.median < episodic->total.median, "SELA median not below episodic");
    if (out.pass)
        out.detail = "archive " + std::to_string(walker_archive->size()) + " cells; median total SELA " +
                     fmt(sela->total.median) + " (success " + fmt(sela->success_rate) +
                     "), uncertainty " + fmt(unc->total.median) + ", episodic " +
                     fmt(episodic->total.median);
    return out;
}

Outcome baseline_caps()
{
    Outcome out;
    const auto params = testing::toy_params();

    // zero noise, no damage: the model is already right, so babbling stops early
    const auto clean = testing::toy_scenario(worlds::NoDamage{}, 0.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = mission::baseline_babbling(clean, params, seed);
        out.require(r.learn_steps < params.babble_iterations,
                    "no early stop on the zero-noise instance");
    }
    for (const auto& r : toy_result.records) {
        if (r.method == mission::Method::Babbling)
            out.require(r.learn_steps <= 15, "babbling learned " + std::to_string(r.learn_steps));
        if (r.method == mission::Method::EpisodicIte)
            out.require(r.learn_steps <= 4 * 10, "episodic learned " + std::to_string(r.learn_steps));
    }
    for (const auto& r : walker_result.records) {
        if (r.method == mission::Method::UncertaintySampling)
            out.require(r.learn_steps == 15,
                        "uncertainty learned " + std::to_string(r.learn_steps));
        if (r.method == mission::Method::EpisodicIte)
            out.require(r.learn_steps <= 4 * 15, "episodic learned " + std::to_string(r.learn_steps));
    }
    out.require(!toy_result.records.empty() && !walker_result.records.empty(),
                "criteria 7 and 8 produced no records");
    if (out.pass)
        out.detail = "caps hold on all recorded runs";
    return out;
}

Outcome determinism()
{
    Outcome out;
    const auto toy_again = experiment::run_experiment(toy_config(), nullptr);
    out.require(experiment::runs_csv(toy_again, false) == experiment::runs_csv(toy_result, false),
                "toy runs.csv differs");
    const auto cfg = walker_config();
    const auto archive = experiment::build_archive(cfg);
    out.require(walker_archive && archive == *walker_archive, "archive differs");
    const auto walker_again = experiment::run_experiment(cfg, &archive);
    out.require(experiment::runs_csv(walker_again, false) ==
                    experiment::runs_csv(walker_result, false),
                "walker runs.csv differs");
    if (out.pass)
        out.detail = "runs.csv byte-identical for both scenarios";
    return out;
}

} // namespace

int main()
{
    report(1, "GP exactness", 1.0, gp_exactness);
    report(2, "prior recovery", 0.0, prior_recovery);
    report(3, "M-BOA decomposition", 0.0, mboa_decomposition);
    report(4, "A* optimality", 2.0, astar_optimality);
    report(5, "MAP-Elites elitism", 30.0, map_elites_elitism);
    report(6, "geometric oracle", 0.0, geometric_oracle);
    report(7, "toy scenario", 60.0, toy_reproduction);
    report(8, "walker scenario", 300.0, walker_reproduction);
    report(9, "baseline caps", 0.0, baseline_caps);
    report(10, "determinism", 0.0, determinism);
    std::printf("%s: %d failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
