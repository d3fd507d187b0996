#include "sela/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sela/baselines.hpp"
#include "sela/format.hpp"

namespace sela::experiment {

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("quantile: no values");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

Quartiles quartiles(const std::vector<double>& v)
{
    return {quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75)};
}

} // namespace

SummaryStats summarize(std::span<const mission::RunRecord> records)
{
    std::vector<mission::Method> order;
    for (const auto& r : records)
        if (std::find(order.begin(), order.end(), r.method) == order.end())
            order.push_back(r.method);

    SummaryStats stats;
    for (const auto method : order) {
        std::vector<double> learn, exec, total;
        std::size_t successes = 0;
        for (const auto& r : records) {
            if (r.method != method)
                continue;
            learn.push_back(r.learn_steps);
            exec.push_back(r.exec_steps);
            total.push_back(r.total_steps);
            successes += r.reached ? 1 : 0;
        }
        MethodSummary s;
        s.method = method;
        s.runs = total.size();
        s.learn = quartiles(learn);
        s.exec = quartiles(exec);
        s.total = quartiles(total);
        s.success_rate = static_cast<double>(successes) / static_cast<double>(s.runs);
        stats.push_back(s);
    }
    return stats;
}

mission::MethodParams make_params(const config::ExperimentConfig& c)
{
    mission::MethodParams p;
    p.acquisition.alpha = c.alpha;
    p.kernel.family = c.kernel_family;
    p.kernel.sigma = c.kernel_sigma;
    switch (c.kernel_distance) {
    case config::DistanceChoice::Auto:
        // the point robot's behavior is a direction
        p.kernel.distance = c.world == worlds::WorldKind::PointRobot ? gp::DistanceKind::WrappedAngular
                                                                     : gp::DistanceKind::Euclidean;
        break;
    case config::DistanceChoice::Euclidean:
        p.kernel.distance = gp::DistanceKind::Euclidean;
        break;
    case config::DistanceChoice::WrappedAngular:
        p.kernel.distance = gp::DistanceKind::WrappedAngular;
        break;
    }
    p.gp_noise = c.gp_noise;
    p.epsilon_goal = c.epsilon_goal;
    p.max_iterations = c.max_iterations;
    p.babble_iterations = c.babble_iterations;
    p.epsilon_model = c.epsilon_model;
    p.uncertainty_iterations = c.uncertainty_iterations;
    p.episodic_success = c.episodic_success;
    p.drop.window = static_cast<std::size_t>(c.drop_window);
    p.drop.threshold = c.drop_threshold;
    p.rsl.cell_size = c.cell_size;
    p.rsl.lookahead_cells = c.lookahead_cells;
    p.rsl.margin_cells = c.planner_margin;
    p.step_cap = c.step_cap;
    return p;
}

mission::Scenario make_scenario(const config::ExperimentConfig& c, const map_elites::Archive* archive)
{
    worlds::DamageModel damage = worlds::NoDamage{};
    if (c.damage == config::DamageKind::AngleOffset)
        damage = worlds::AngleOffset{c.damage_offset};
    else if (c.damage == config::DamageKind::FrozenJoint)
        damage = worlds::FrozenJoint{static_cast<std::size_t>(c.damage_joint)};

    if (c.world == worlds::WorldKind::PointRobot) {
        return mission::Scenario{
            .world = c.world,
            .damage = damage,
            .noise = {c.noise_variance},
            .start = c.start,
            .goal = c.goal,
            .candidates =
                acquisition::CandidateSet::angular_grid(static_cast<std::size_t>(c.theta_resolution)),
            .prior = [](const BehaviorPoint& x) { return worlds::point_robot_intact(x[0]); },
            .sample_behavior =
                [](std::mt19937_64& rng) {
                    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
                    return BehaviorPoint::Constant(1, angle(rng)).eval();
                },
        };
    }

    if (archive == nullptr || archive->empty())
        throw std::invalid_argument("segment walker needs a non-empty behavior-performance archive");
    if (archive->behavior_dim() != worlds::walker_joints || archive->outcome_dim() != 2)
        throw std::invalid_argument("archive dimensions do not match the segment walker");
    auto candidates = map_elites::archive_candidates(*archive);
    auto elites = candidates.points();
    return mission::Scenario{
        .world = c.world,
        .damage = damage,
        .noise = {c.noise_variance},
        .start = c.start,
        .goal = c.goal,
        .candidates = std::move(candidates),
        .prior = map_elites::archive_prior(*archive),
        .sample_behavior =
            [elites = std::move(elites)](std::mt19937_64& rng) {
                std::uniform_int_distribution<std::size_t> pick(0, elites.size() - 1);
                return elites[pick(rng)];
            },
    };
}

ExperimentResult run_experiment(const config::ExperimentConfig& c, const map_elites::Archive* archive)
{
    const mission::Scenario scenario = make_scenario(c, archive);
    const mission::MethodParams params = make_params(c);
    ExperimentResult result;
    result.world = c.world;
    for (const auto method : c.methods)
        for (int r = 0; r < c.replicates; ++r)
            result.records.push_back(mission::run_method(method, scenario, params,
                                                         c.base_seed + static_cast<std::uint64_t>(r)));
    result.summary = summarize(result.records);
    return result;
}

ExperimentResult run_experiment(const config::ExperimentConfig& c)
{
    if (c.world == worlds::WorldKind::PointRobot)
        return run_experiment(c, nullptr);
    if (c.archive_path.empty())
        throw std::runtime_error("segment_walker runs need archive_path (see build-archive)");
    if (!std::filesystem::exists(c.archive_path))
        throw std::runtime_error("archive file not found: " + c.archive_path);
    const auto archive = map_elites::load_archive_file(c.archive_path);
    return run_experiment(c, &archive);
}

std::string runs_csv(const ExperimentResult& result, bool with_wall_time)
{
    std::ostringstream out;
    out << "run_id,method,world,seed,learn_steps,exec_steps,total_steps,reached,wall_ms\n";
    std::size_t id = 0;
    for (const auto& r : result.records) {
        out << id++ << ',' << mission::method_name(r.method) << ','
            << config::world_name(result.world) << ',' << r.seed << ',' << r.learn_steps << ','
            << r.exec_steps << ',' << r.total_steps << ',' << (r.reached ? 1 : 0) << ','
            << format_double(with_wall_time ? r.wall_ms : 0.0) << '\n';
    }
    return out.str();
}

std::string summary_csv(const SummaryStats& stats)
{
    std::ostringstream out;
    out << "method,metric,q25,median,q75,success_rate\n";
    for (const auto& s : stats) {
        const std::pair<const char*, const Quartiles*> rows[] = {
            {"learn_steps", &s.learn}, {"exec_steps", &s.exec}, {"total_steps", &s.total}};
        for (const auto& [name, q] : rows) {
            out << mission::method_name(s.method) << ',' << name << ',' << format_double(q->q25)
                << ',' << format_double(q->median) << ',' << format_double(q->q75) << ','
                << format_double(s.success_rate) << '\n';
        }
    }
    return out.str();
}

ParsedRuns parse_runs_csv(std::string_view text)
{
    ParsedRuns parsed;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    const auto fail = [&line_no](const std::string& what) {
        throw std::runtime_error("runs.csv line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "run_id,method,world,seed,learn_steps,exec_steps,total_steps,reached,wall_ms")
                fail("unexpected header");
            continue;
        }
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            f.push_back(cell);
        if (f.size() != 9)
            fail("expected 9 columns");
        mission::RunRecord r;
        const auto method = mission::parse_method(f[1]);
        if (!method)
            fail("unknown method '" + f[1] + "'");
        r.method = *method;
        long long seed = 0, learn = 0, exec = 0, total = 0, reached = 0;
        if (!parse_int(f[3], seed) || !parse_int(f[4], learn) || !parse_int(f[5], exec) ||
            !parse_int(f[6], total) || !parse_int(f[7], reached) || !parse_double(f[8], r.wall_ms))
            fail("malformed number");
        if (learn + exec != total)
            fail("learn_steps + exec_steps != total_steps");
        r.seed = static_cast<std::uint64_t>(seed);
        r.learn_steps = static_cast<int>(learn);
        r.exec_steps = static_cast<int>(exec);
        r.total_steps = static_cast<int>(total);
        r.reached = reached != 0;
        parsed.records.push_back(r);
        parsed.worlds.push_back(f[2]);
    }
    if (line_no == 0)
        throw std::runtime_error("runs.csv: empty input");
    return parsed;
}

void write_results(const ExperimentResult& result, const std::filesystem::path& out_dir,
                   bool with_wall_time)
{
    if (result.records.empty())
        throw std::invalid_argument("write_results: no records");
    std::filesystem::create_directories(out_dir);
    const auto write = [](const std::filesystem::path& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        out << body;
        if (!out)
            throw std::runtime_error("failed writing " + path.string());
    };
    write(out_dir / "runs.csv", runs_csv(result, with_wall_time));
    write(out_dir / "summary.csv", summary_csv(result.summary));
}

map_elites::IlluminateConfig illuminate_config(const config::ExperimentConfig& c)
{
    map_elites::IlluminateConfig ic;
    ic.budget = static_cast<std::size_t>(c.archive_budget);
    ic.seed = c.archive_seed;
    ic.grid_shape = c.archive_grid;
    ic.lower = BehaviorPoint::Constant(worlds::walker_joints, -1.0);
    ic.upper = BehaviorPoint::Constant(worlds::walker_joints, 1.0);
    ic.outcome_dim = 2;
    ic.mutation_sigma = c.mutation_sigma;
    ic.initial_batch_fraction = c.initial_batch_fraction;
    ic.min_initial_batch = static_cast<std::size_t>(c.min_initial_batch);
    return ic;
}

map_elites::Archive build_archive(const config::ExperimentConfig& c)
{
    if (c.world != worlds::WorldKind::SegmentWalker)
        throw std::invalid_argument("build-archive needs world = segment_walker");
    return map_elites::illuminate(worlds::segment_walker_evaluation, illuminate_config(c));
}

} // namespace sela::experiment
