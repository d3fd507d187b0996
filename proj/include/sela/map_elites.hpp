#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sela/acquisition.hpp"
#include "sela/gp.hpp"
#include "sela/types.hpp"

namespace sela::map_elites {

/// Behavior-descriptor coordinates, each in [0, 1].
using Descriptor = Eigen::VectorXd;
using CellIndex = std::vector<int>;

struct Elite {
    BehaviorPoint behavior;
    Descriptor descriptor;
    double performance = 0.0;
    GenericReward outcome; // intact-model outcome, reused as prior mean
};

enum class OfferResult { Inserted, Replaced, Rejected };

/// floor(d_i * n_i) per dimension, with d_i = 1 mapped to the last bin.
CellIndex bin(const Descriptor& descriptor, std::span<const int> grid_shape);

/// Sparse behavior-performance map; each cell keeps its best elite.
class Archive {
public:
    Archive(std::vector<int> grid_shape, std::size_t behavior_dim, std::size_t outcome_dim);

    OfferResult offer(Elite candidate);

    CellIndex bin(const Descriptor& descriptor) const;
    const Elite* find(const CellIndex& cell) const;

    std::size_t size() const { return cells_.size(); }
    std::size_t total_cells() const;
    double coverage() const;
    bool empty() const { return cells_.empty(); }

    const std::vector<int>& grid_shape() const { return grid_shape_; }
    std::size_t behavior_dim() const { return behavior_dim_; }
    std::size_t outcome_dim() const { return outcome_dim_; }
    const std::map<CellIndex, Elite>& cells() const { return cells_; }
    const Elite& best() const;

    friend bool operator==(const Archive& a, const Archive& b);

private:
    std::vector<int> grid_shape_;
    std::size_t behavior_dim_;
    std::size_t outcome_dim_;
    std::map<CellIndex, Elite> cells_;
};

struct Evaluation {
    Descriptor descriptor;
    double performance = 0.0;
    GenericReward outcome;
};

using Evaluator = std::function<Evaluation(const BehaviorPoint&)>;

/// Called after every offer, in evaluation order.
using OfferObserver =
    std::function<void(std::size_t evaluation, const Elite& candidate, OfferResult result)>;

struct IlluminateConfig {
    std::size_t budget = 50000;
    std::uint64_t seed = 1;
    std::vector<int> grid_shape{20, 20};
    BehaviorPoint lower; // behavior domain box
    BehaviorPoint upper;
    std::size_t outcome_dim = 2;
    double mutation_sigma = 0.1;         // fraction of the domain width
    double initial_batch_fraction = 0.1; // of the budget
    std::size_t min_initial_batch = 100;
};

/// Size of the uniform-random initial batch for a given config.
std::size_t initial_batch_size(const IlluminateConfig& config);

/// Plain MAP-Elites: a uniform-random batch, then repeated uniform parent
/// selection over occupied cells, Gaussian mutation and elitist offers.
/// Calls the evaluator exactly `budget` times.
Archive illuminate(const Evaluator& evaluator, const IlluminateConfig& config,
                   const OfferObserver& observer = {});

class ArchiveParseError : public std::runtime_error {
public:
    ArchiveParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Text format:
///   sela-archive v1 m=<m> grid=<n1>x..x<nm> b=<behavior-dim> d=<gr-dim>
///   cell=<i1,..> behavior=<b1,..> descriptor=<d1,..> perf=<p> outcome=<o1,..>
/// one elite per line in cell order, numbers as shortest round-trip decimals.
std::string save_archive(const Archive& archive);
Archive load_archive(std::string_view text);

void save_archive_file(const Archive& archive, const std::filesystem::path& path);
Archive load_archive_file(const std::filesystem::path& path);

/// Elites' behaviors, in cell order.
acquisition::CandidateSet archive_candidates(const Archive& archive);

/// P(x) = cached outcome of the elite whose behavior is x. Querying a
/// behavior that is not an elite throws std::out_of_range.
gp::PriorMean archive_prior(const Archive& archive);

} // namespace sela::map_elites
