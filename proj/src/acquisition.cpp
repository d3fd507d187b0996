#include "sela/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sela::acquisition {

CandidateSet::CandidateSet(std::vector<BehaviorPoint> points, CandidateSource source)
    : points_(std::move(points)), source_(source)
{
    if (points_.empty())
        throw std::invalid_argument("CandidateSet: empty candidate set");

    std::vector<std::vector<double>> keys;
    keys.reserve(points_.size());
    for (const auto& p : points_)
        keys.emplace_back(p.data(), p.data() + p.size());
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw std::invalid_argument("CandidateSet: duplicate candidate point");
}

CandidateSet CandidateSet::angular_grid(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("CandidateSet::angular_grid: resolution must be positive");
    std::vector<BehaviorPoint> pts;
    pts.reserve(n);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        // offset from the middle so that 0 is hit exactly for even n
        const double theta = (static_cast<double>(i + 1) - static_cast<double>(n) / 2.0) * step;
        pts.push_back(BehaviorPoint::Constant(1, theta));
    }
    pts.back()[0] = std::numbers::pi;
    return CandidateSet(std::move(pts), CandidateSource::DenseGrid);
}

double ucb_score(double reward_of_mean, double sigma, const AcquisitionConfig& config)
{
    return reward_of_mean + config.alpha * sigma;
}

double aggregate_sigma(const gp::Prediction& prediction)
{
    return std::sqrt(static_cast<double>(prediction.mean.size()) * prediction.variance);
}

Selection select_next(const CandidateSet& candidates, const gp::GpModel& model,
                      const RewardFunction& reward, const AcquisitionConfig& config)
{
    if (candidates.size() == 0)
        throw std::invalid_argument("select_next: empty candidate set");

    Selection best;
    bool have_best = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        gp::Prediction pred = model.predict(candidates[i]);
        const double score = ucb_score(reward(pred.mean), aggregate_sigma(pred), config);
        if (!have_best || score > best.score) {
            best.index = i;
            best.score = score;
            best.prediction = std::move(pred);
            have_best = true;
        }
    }
    best.point = candidates[best.index];
    return best;
}

} // namespace sela::acquisition
