#pragma once

#include <cstddef>
#include <vector>

#include "sela/gp.hpp"
#include "sela/types.hpp"

namespace sela::acquisition {

struct AcquisitionConfig {
    double alpha = 0.05; // UCB exploration weight, >= 0
};

enum class CandidateSource { DenseGrid, ArchiveElites };

/// The finite set the argmax runs over. Nonempty, no duplicate points.
class CandidateSet {
public:
    CandidateSet(std::vector<BehaviorPoint> points, CandidateSource source);

    /// n equally spaced directions in (-pi, pi], ending exactly at pi.
    static CandidateSet angular_grid(std::size_t n);

    const std::vector<BehaviorPoint>& points() const { return points_; }
    const BehaviorPoint& operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const { return points_.size(); }
    CandidateSource source() const { return source_; }

private:
    std::vector<BehaviorPoint> points_;
    CandidateSource source_;
};

/// reward_of_mean + alpha * sigma
double ucb_score(double reward_of_mean, double sigma, const AcquisitionConfig& config);

/// sqrt of the summed per-dimension variances; all dimensions share one here.
double aggregate_sigma(const gp::Prediction& prediction);

struct Selection {
    std::size_t index = 0;
    BehaviorPoint point;
    double score = 0.0;
    gp::Prediction prediction;
};

/// argmax_x ucb(reward(mean(x)), sigma_agg(x)); ties go to the lowest index.
Selection select_next(const CandidateSet& candidates, const gp::GpModel& model,
                      const RewardFunction& reward, const AcquisitionConfig& config);

} // namespace sela::acquisition
