// sela: experiment harness for semi-episodic damage recovery.
//
//   sela run --config <path> --out <dir> [--replicates K] [--base-seed S]
//   sela build-archive --config <path> --out <file>
//   sela summarize --runs <csv>
//   sela show-config --config <path>
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sela/config.hpp"
#include "sela/experiment.hpp"
#include "sela/map_elites.hpp"

namespace {

constexpr int config_failure = 1;
constexpr int runtime_failure = 2;

void print_summary(const sela::experiment::SummaryStats& stats)
{
    std::cout << sela::experiment::summary_csv(stats);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Semi-episodic damage recovery experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string runs_path;
    int replicates = 0;
    long long base_seed = -1;

    auto* run = app.add_subcommand("run", "Run replicated experiments and write runs.csv / summary.csv");
    run->add_option("--config", config_path, "Experiment config file")->required();
    run->add_option("--out", out_path, "Output directory")->required();
    run->add_option("--replicates", replicates, "Override the replicate count")->check(CLI::PositiveNumber);
    run->add_option("--base-seed", base_seed, "Override the base seed")->check(CLI::NonNegativeNumber);

    auto* build = app.add_subcommand("build-archive", "Build the walker behavior-performance map");
    build->add_option("--config", config_path, "Experiment config file")->required();
    build->add_option("--out", out_path, "Archive file to write")->required();

    auto* summarize = app.add_subcommand("summarize", "Recompute summary statistics from runs.csv");
    summarize->add_option("--runs", runs_path, "runs.csv file")->required();

    auto* show = app.add_subcommand("show-config", "Print the effective configuration");
    show->add_option("--config", config_path, "Experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : config_failure;
    }

    sela::config::ExperimentConfig config;
    if (!config_path.empty()) {
        try {
            config = sela::config::load_config_file(config_path);
        } catch (const sela::config::ConfigError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return config_failure;
        }
        if (replicates > 0)
            config.replicates = replicates;
        if (base_seed >= 0)
            config.base_seed = static_cast<std::uint64_t>(base_seed);
    }

    try {
        if (*show) {
            std::cout << sela::config::dump_config(config);
        } else if (*run) {
            const auto result = sela::experiment::run_experiment(config);
            sela::experiment::write_results(result, out_path, config.record_wall_time);
            print_summary(result.summary);
        } else if (*build) {
            const auto archive = sela::experiment::build_archive(config);
            sela::map_elites::save_archive_file(archive, out_path);
            std::cout << "archive: " << archive.size() << " elites, coverage "
                      << archive.coverage() << ", best performance " << archive.best().performance
                      << '\n';
        } else if (*summarize) {
            std::ifstream in(runs_path, std::ios::binary);
            if (!in)
                throw std::runtime_error("cannot read " + runs_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            const auto parsed = sela::experiment::parse_runs_csv(buf.str());
            print_summary(sela::experiment::summarize(parsed.records));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return runtime_failure;
    }
    return 0;
}
