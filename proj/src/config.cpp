#include "sela/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sela/format.hpp"

namespace sela::config {

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message
                                  : "config: " + message),
      line_(line), key_(std::move(key))
{
}

std::string_view world_name(worlds::WorldKind kind)
{
    return kind == worlds::WorldKind::PointRobot ? "point_robot" : "segment_walker";
}

namespace {

struct BadValue {
    std::string message;
};

double real(std::string_view v)
{
    double x = 0.0;
    if (!parse_double(v, x) || !std::isfinite(x))
        throw BadValue{"expected a number, got '" + std::string(v) + "'"};
    return x;
}

long long integer(std::string_view v)
{
    long long x = 0;
    if (!parse_int(v, x))
        throw BadValue{"expected an integer, got '" + std::string(v) + "'"};
    return x;
}

double nonnegative(std::string_view v, const char* name)
{
    const double x = real(v);
    if (x < 0.0)
        throw BadValue{std::string(name) + " must be >= 0"};
    return x;
}

double positive(std::string_view v, const char* name)
{
    const double x = real(v);
    if (x <= 0.0)
        throw BadValue{std::string(name) + " must be > 0"};
    return x;
}

int count(std::string_view v, const char* name, long long min)
{
    const long long x = integer(v);
    if (x < min || x > 1'000'000'000)
        throw BadValue{std::string(name) + " must be >= " + std::to_string(min)};
    return static_cast<int>(x);
}

std::vector<std::string_view> split_list(std::string_view v, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = v.find(sep, start);
        out.push_back(trim(v.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

Pose point(std::string_view v)
{
    const auto parts = split_list(v, ',');
    if (parts.size() != 2)
        throw BadValue{"expected 'x, y'"};
    return {real(parts[0]), real(parts[1])};
}

bool boolean(std::string_view v)
{
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    throw BadValue{"expected true or false"};
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table{
        {"world",
         [](ExperimentConfig& c, std::string_view v) {
             if (v == "point_robot")
                 c.world = worlds::WorldKind::PointRobot;
             else if (v == "segment_walker")
                 c.world = worlds::WorldKind::SegmentWalker;
             else
                 throw BadValue{"world must be point_robot or segment_walker"};
         }},
        {"damage",
         [](ExperimentConfig& c, std::string_view v) {
             if (v == "none")
                 c.damage = DamageKind::None;
             else if (v == "angle_offset")
                 c.damage = DamageKind::AngleOffset;
             else if (v == "frozen_joint")
                 c.damage = DamageKind::FrozenJoint;
             else
                 throw BadValue{"damage must be none, angle_offset or frozen_joint"};
         }},
        {"damage_offset", [](ExperimentConfig& c, std::string_view v) { c.damage_offset = real(v); }},
        {"damage_joint",
         [](ExperimentConfig& c, std::string_view v) { c.damage_joint = count(v, "damage_joint", 0); }},
        {"noise_variance",
         [](ExperimentConfig& c, std::string_view v) {
             c.noise_variance = nonnegative(v, "noise_variance");
         }},
        {"start", [](ExperimentConfig& c, std::string_view v) { c.start = point(v); }},
        {"goal", [](ExperimentConfig& c, std::string_view v) { c.goal = point(v); }},
        {"epsilon_goal",
         [](ExperimentConfig& c, std::string_view v) { c.epsilon_goal = positive(v, "epsilon_goal"); }},
        {"methods",
         [](ExperimentConfig& c, std::string_view v) {
             c.methods.clear();
             for (auto name : split_list(v, ',')) {
                 const auto m = mission::parse_method(name);
                 if (!m)
                     throw BadValue{"unknown method '" + std::string(name) +
                                    "' (sela, babbling, episodic_ite, uncertainty)"};
                 c.methods.push_back(*m);
             }
         }},
        {"replicates",
         [](ExperimentConfig& c, std::string_view v) { c.replicates = count(v, "replicates", 1); }},
        {"base_seed",
         [](ExperimentConfig& c, std::string_view v) {
             c.base_seed = static_cast<std::uint64_t>(count(v, "base_seed", 0));
         }},
        {"alpha", [](ExperimentConfig& c, std::string_view v) { c.alpha = nonnegative(v, "alpha"); }},
        {"kernel_family",
         [](ExperimentConfig& c, std::string_view v) {
             if (v == "squared_exponential")
                 c.kernel_family = gp::KernelFamily::SquaredExponential;
             else if (v == "exponential")
                 c.kernel_family = gp::KernelFamily::Exponential;
             else
                 throw BadValue{"kernel_family must be squared_exponential or exponential"};
         }},
        {"kernel_sigma",
         [](ExperimentConfig& c, std::string_view v) { c.kernel_sigma = positive(v, "kernel_sigma"); }},
        {"kernel_distance",
         [](ExperimentConfig& c, std::string_view v) {
             if (v == "auto")
                 c.kernel_distance = DistanceChoice::Auto;
             else if (v == "euclidean")
                 c.kernel_distance = DistanceChoice::Euclidean;
             else if (v == "wrapped_angular")
                 c.kernel_distance = DistanceChoice::WrappedAngular;
             else
                 throw BadValue{"kernel_distance must be auto, euclidean or wrapped_angular"};
         }},
        {"gp_noise",
         [](ExperimentConfig& c, std::string_view v) { c.gp_noise = nonnegative(v, "gp_noise"); }},
        {"max_iterations",
         [](ExperimentConfig& c, std::string_view v) {
             c.max_iterations = count(v, "max_iterations", 1);
         }},
        {"babble_iterations",
         [](ExperimentConfig& c, std::string_view v) {
             c.babble_iterations = count(v, "babble_iterations", 1);
         }},
        {"epsilon_model",
         [](ExperimentConfig& c, std::string_view v) {
             c.epsilon_model = nonnegative(v, "epsilon_model");
         }},
        {"uncertainty_iterations",
         [](ExperimentConfig& c, std::string_view v) {
             c.uncertainty_iterations = count(v, "uncertainty_iterations", 1);
         }},
        {"episodic_success",
         [](ExperimentConfig& c, std::string_view v) { c.episodic_success = real(v); }},
        {"drop_window",
         [](ExperimentConfig& c, std::string_view v) { c.drop_window = count(v, "drop_window", 1); }},
        {"drop_threshold",
         [](ExperimentConfig& c, std::string_view v) {
             c.drop_threshold = positive(v, "drop_threshold");
         }},
        {"lookahead_cells",
         [](ExperimentConfig& c, std::string_view v) {
             c.lookahead_cells = count(v, "lookahead_cells", 1);
         }},
        {"cell_size",
         [](ExperimentConfig& c, std::string_view v) { c.cell_size = positive(v, "cell_size"); }},
        {"planner_margin",
         [](ExperimentConfig& c, std::string_view v) {
             c.planner_margin = count(v, "planner_margin", 0);
         }},
        {"step_cap",
         [](ExperimentConfig& c, std::string_view v) { c.step_cap = count(v, "step_cap", 1); }},
        {"theta_resolution",
         [](ExperimentConfig& c, std::string_view v) {
             c.theta_resolution = count(v, "theta_resolution", 1);
         }},
        {"archive_path",
         [](ExperimentConfig& c, std::string_view v) { c.archive_path = std::string(v); }},
        {"archive_budget",
         [](ExperimentConfig& c, std::string_view v) {
             c.archive_budget = count(v, "archive_budget", 1);
         }},
        {"archive_grid",
         [](ExperimentConfig& c, std::string_view v) {
             c.archive_grid.clear();
             for (auto part : split_list(v, 'x'))
                 c.archive_grid.push_back(count(part, "archive_grid", 1));
             if (c.archive_grid.size() != 2)
                 throw BadValue{"archive_grid must be <n1>x<n2>"};
         }},
        {"archive_seed",
         [](ExperimentConfig& c, std::string_view v) {
             c.archive_seed = static_cast<std::uint64_t>(count(v, "archive_seed", 0));
         }},
        {"mutation_sigma",
         [](ExperimentConfig& c, std::string_view v) {
             c.mutation_sigma = positive(v, "mutation_sigma");
         }},
        {"initial_batch_fraction",
         [](ExperimentConfig& c, std::string_view v) {
             c.initial_batch_fraction = nonnegative(v, "initial_batch_fraction");
         }},
        {"min_initial_batch",
         [](ExperimentConfig& c, std::string_view v) {
             c.min_initial_batch = count(v, "min_initial_batch", 1);
         }},
        {"record_wall_time",
         [](ExperimentConfig& c, std::string_view v) { c.record_wall_time = boolean(v); }},
    };
    return table;
}

} // namespace

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig config;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, std::string(line), "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError(line_no, std::string(key), "unknown key `" + std::string(key) + "`");
        if (!seen.insert(std::string(key)).second)
            throw ConfigError(line_no, std::string(key), "duplicate key `" + std::string(key) + "`");
        if (value.empty())
            throw ConfigError(line_no, std::string(key), "missing value for `" + std::string(key) + "`");
        try {
            it->second(config, value);
        } catch (const BadValue& bad) {
            throw ConfigError(line_no, std::string(key), bad.message);
        }
    }

    if (!seen.contains("world"))
        throw ConfigError(0, "world", "missing required key `world`");

    const bool walker = config.world == worlds::WorldKind::SegmentWalker;
    if (!seen.contains("max_iterations"))
        config.max_iterations = walker ? 15 : 10;
    if (!seen.contains("methods")) {
        using mission::Method;
        config.methods = walker ? std::vector{Method::Sela, Method::UncertaintySampling,
                                              Method::EpisodicIte}
                                : std::vector{Method::Sela, Method::Babbling, Method::EpisodicIte};
    }
    if (config.damage == DamageKind::AngleOffset && walker)
        throw ConfigError(0, "damage", "angle_offset damage needs world = point_robot");
    if (config.damage == DamageKind::FrozenJoint) {
        if (!walker)
            throw ConfigError(0, "damage", "frozen_joint damage needs world = segment_walker");
        if (config.damage_joint >= static_cast<int>(worlds::walker_joints))
            throw ConfigError(0, "damage_joint", "damage_joint must be < 4");
    }
    return config;
}

ExperimentConfig load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(0, "", "cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& c)
{
    const auto pt = [](const Pose& p) { return format_double(p.x()) + ", " + format_double(p.y()); };
    std::ostringstream out;
    out << "world = " << world_name(c.world) << '\n';
    out << "damage = "
        << (c.damage == DamageKind::None          ? "none"
            : c.damage == DamageKind::AngleOffset ? "angle_offset"
                                                  : "frozen_joint")
        << '\n';
    out << "damage_offset = " << format_double(c.damage_offset) << '\n';
    out << "damage_joint = " << c.damage_joint << '\n';
    out << "noise_variance = " << format_double(c.noise_variance) << '\n';
    out << "start = " << pt(c.start) << '\n';
    out << "goal = " << pt(c.goal) << '\n';
    out << "epsilon_goal = " << format_double(c.epsilon_goal) << '\n';
    out << "methods = ";
    for (std::size_t i = 0; i < c.methods.size(); ++i)
        out << (i ? ", " : "") << mission::method_name(c.methods[i]);
    out << '\n';
    out << "replicates = " << c.replicates << '\n';
    out << "base_seed = " << c.base_seed << '\n';
    out << "alpha = " << format_double(c.alpha) << '\n';
    out << "kernel_family = "
        << (c.kernel_family == gp::KernelFamily::SquaredExponential ? "squared_exponential"
                                                                    : "exponential")
        << '\n';
    out << "kernel_sigma = " << format_double(c.kernel_sigma) << '\n';
    out << "kernel_distance = "
        << (c.kernel_distance == DistanceChoice::Auto        ? "auto"
            : c.kernel_distance == DistanceChoice::Euclidean ? "euclidean"
                                                             : "wrapped_angular")
        << '\n';
    out << "gp_noise = " << format_double(c.gp_noise) << '\n';
    out << "max_iterations = " << c.max_iterations << '\n';
    out << "babble_iterations = " << c.babble_iterations << '\n';
    out << "epsilon_model = " << format_double(c.epsilon_model) << '\n';
    out << "uncertainty_iterations = " << c.uncertainty_iterations << '\n';
    out << "episodic_success = " << format_double(c.episodic_success) << '\n';
    out << "drop_window = " << c.drop_window << '\n';
    out << "drop_threshold = " << format_double(c.drop_threshold) << '\n';
    out << "lookahead_cells = " << c.lookahead_cells << '\n';
    out << "cell_size = " << format_double(c.cell_size) << '\n';
    out << "planner_margin = " << c.planner_margin << '\n';
    out << "step_cap = " << c.step_cap << '\n';
    out << "theta_resolution = " << c.theta_resolution << '\n';
    if (!c.archive_path.empty())
        out << "archive_path = " << c.archive_path << '\n';
    out << "archive_budget = " << c.archive_budget << '\n';
    out << "archive_grid = " << c.archive_grid[0] << 'x' << c.archive_grid[1] << '\n';
    out << "archive_seed = " << c.archive_seed << '\n';
    out << "mutation_sigma = " << format_double(c.mutation_sigma) << '\n';
    out << "initial_batch_fraction = " << format_double(c.initial_batch_fraction) << '\n';
    out << "min_initial_batch = " << c.min_initial_batch << '\n';
    out << "record_wall_time = " << (c.record_wall_time ? "true" : "false") << '\n';
    return out.str();
}

} // namespace sela::config
