#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "sela/types.hpp"

namespace sela::gp {

enum class KernelFamily { SquaredExponential, Exponential };
enum class DistanceKind { Euclidean, WrappedAngular };

/// Stationary kernel with unit signal variance, so k(x, x) = 1.
///
/// SquaredExponential: exp(-r^2 / (2 sigma^2)); Exponential: exp(-r / sigma).
/// With WrappedAngular every coordinate difference is taken on the circle,
/// min(|d|, 2pi - |d|), before the Euclidean norm.
struct Kernel {
    KernelFamily family = KernelFamily::SquaredExponential;
    double sigma = 0.1;
    DistanceKind distance = DistanceKind::Euclidean;

    double distance_between(const BehaviorPoint& a, const BehaviorPoint& b) const;
    double operator()(const BehaviorPoint& a, const BehaviorPoint& b) const;
};

double kernel_eval(const Kernel& kernel, const BehaviorPoint& a, const BehaviorPoint& b);

/// Prior mean P(x): one value per output dimension. Must be deterministic.
using PriorMean = std::function<Eigen::VectorXd(const BehaviorPoint&)>;

PriorMean zero_prior(std::size_t output_dim);

/// D_{1:t}: inputs, d-dimensional outputs and the sampling-noise variance.
class ObservationSet {
public:
    ObservationSet(std::size_t output_dim, double noise_variance);

    /// Throws std::invalid_argument on a dimension mismatch.
    void add(const BehaviorPoint& x, const Eigen::VectorXd& y);

    std::size_t size() const { return inputs_.size(); }
    bool empty() const { return inputs_.empty(); }
    std::size_t output_dim() const { return output_dim_; }
    double noise_variance() const { return noise_variance_; }

    const std::vector<BehaviorPoint>& inputs() const { return inputs_; }
    const std::vector<Eigen::VectorXd>& outputs() const { return outputs_; }

private:
    std::size_t output_dim_;
    double noise_variance_;
    std::vector<BehaviorPoint> inputs_;
    std::vector<Eigen::VectorXd> outputs_;
};

class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Prediction {
    Eigen::VectorXd mean;
    double variance = 0.0;
};

/// Multi-output GP posterior around a prior mean (map-based BO form):
///
///   m_t(x)   = P(x) + k^T K^-1 (Y - P(x_1:t))
///   s_t^2(x) = k(x, x) - k^T K^-1 k,   K = [k(x_i, x_j)] + noise * I
///
/// All output dimensions share inputs and kernel, so one Cholesky factor
/// serves every dimension and the variance is common to all of them.
/// A fitted model is immutable.
class GpModel {
public:
    static constexpr double jitter = 1e-10;

    /// Throws FactorizationError when K (plus one jitter retry) is not SPD.
    static GpModel fit(ObservationSet observations, Kernel kernel, PriorMean prior);

    Prediction predict(const BehaviorPoint& x) const;

    const Kernel& kernel() const { return kernel_; }
    const ObservationSet& observations() const { return observations_; }
    const PriorMean& prior() const { return prior_; }
    std::size_t size() const { return observations_.size(); }
    std::size_t output_dim() const { return observations_.output_dim(); }

    /// K as assembled, including the noise diagonal (and jitter, if used).
    const Eigen::MatrixXd& kernel_matrix() const { return gram_; }
    Eigen::MatrixXd lower_factor() const;
    bool used_jitter() const { return used_jitter_; }

private:
    GpModel(ObservationSet observations, Kernel kernel, PriorMean prior);

    ObservationSet observations_;
    Kernel kernel_;
    PriorMean prior_;
    Eigen::MatrixXd gram_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::MatrixXd weights_; // K^-1 (Y - P), t x d
    std::ptrdiff_t input_dim_ = -1;
    bool used_jitter_ = false;
};

} // namespace sela::gp
