#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sela/config.hpp"
#include "sela/map_elites.hpp"
#include "sela/mission.hpp"

namespace sela::experiment {

struct Quartiles {
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
};

struct MethodSummary {
    mission::Method method = mission::Method::Sela;
    std::size_t runs = 0;
    Quartiles learn;
    Quartiles exec;
    Quartiles total;
    double success_rate = 0.0;
};

/// One entry per method, in order of first appearance.
using SummaryStats = std::vector<MethodSummary>;

/// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> values, double q);

SummaryStats summarize(std::span<const mission::RunRecord> records);

struct ExperimentResult {
    worlds::WorldKind world = worlds::WorldKind::PointRobot;
    std::vector<mission::RunRecord> records; // method-major, seed order
    SummaryStats summary;
};

mission::MethodParams make_params(const config::ExperimentConfig& config);

/// `archive` is required for the segment walker and ignored otherwise.
mission::Scenario make_scenario(const config::ExperimentConfig& config,
                                const map_elites::Archive* archive);

/// Runs every method for seeds base_seed .. base_seed + replicates - 1.
ExperimentResult run_experiment(const config::ExperimentConfig& config,
                                const map_elites::Archive* archive);

/// Loads the walker archive from config.archive_path when needed.
ExperimentResult run_experiment(const config::ExperimentConfig& config);

/// Header: run_id,method,world,seed,learn_steps,exec_steps,total_steps,reached,wall_ms
/// wall_ms is written as 0 unless `with_wall_time`, keeping files reproducible.
std::string runs_csv(const ExperimentResult& result, bool with_wall_time);

/// Header: method,metric,q25,median,q75,success_rate
std::string summary_csv(const SummaryStats& stats);

struct ParsedRuns {
    std::vector<mission::RunRecord> records;
    std::vector<std::string> worlds;
};

/// Throws std::runtime_error naming the offending line.
ParsedRuns parse_runs_csv(std::string_view text);

/// Writes runs.csv and summary.csv into `out_dir`, creating it if needed.
void write_results(const ExperimentResult& result, const std::filesystem::path& out_dir,
                   bool with_wall_time);

map_elites::IlluminateConfig illuminate_config(const config::ExperimentConfig& config);

/// MAP-Elites on the intact segment walker.
map_elites::Archive build_archive(const config::ExperimentConfig& config);

} // namespace sela::experiment
