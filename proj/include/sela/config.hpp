#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sela/gp.hpp"
#include "sela/mission.hpp"
#include "sela/types.hpp"
#include "sela/worlds.hpp"

namespace sela::config {

enum class DamageKind { None, AngleOffset, FrozenJoint };
enum class DistanceChoice { Auto, Euclidean, WrappedAngular };

/// One experiment. Field defaults are the published hyperparameters; the two
/// world-dependent ones (iteration cap, method list) are resolved by
/// parse_config once the world is known.
struct ExperimentConfig {
    worlds::WorldKind world = worlds::WorldKind::PointRobot;

    DamageKind damage = DamageKind::None;
    double damage_offset = 0.5;
    int damage_joint = 1;
    double noise_variance = 0.01;
    Pose start = Pose::Zero();
    Pose goal{2.0, 2.0};
    double epsilon_goal = 0.1;

    std::vector<mission::Method> methods;
    int replicates = 50;
    std::uint64_t base_seed = 1;

    double alpha = 0.05;
    gp::KernelFamily kernel_family = gp::KernelFamily::SquaredExponential;
    double kernel_sigma = 0.1;
    DistanceChoice kernel_distance = DistanceChoice::Auto;
    double gp_noise = 0.001;

    int max_iterations = 10;
    int babble_iterations = 15;
    double epsilon_model = 0.01;
    int uncertainty_iterations = 15;
    double episodic_success = 0.09;
    int drop_window = 3;
    double drop_threshold = 0.15;
    int lookahead_cells = 4;
    double cell_size = 0.1;
    int planner_margin = 10;
    int step_cap = 300;
    int theta_resolution = 360;

    std::string archive_path;
    int archive_budget = 50000;
    std::vector<int> archive_grid{20, 20};
    std::uint64_t archive_seed = 1;
    double mutation_sigma = 0.1;
    double initial_batch_fraction = 0.1;
    int min_initial_batch = 100;

    bool record_wall_time = false;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, std::string key, const std::string& message);
    std::size_t line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

/// Flat `key = value` lines; `#` starts a comment. `world` is required,
/// unknown or repeated keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);

/// Every effective setting, in a form parse_config accepts.
std::string dump_config(const ExperimentConfig& config);

std::string_view world_name(worlds::WorldKind kind);

} // namespace sela::config
