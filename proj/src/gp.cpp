#include "sela/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace sela::gp {

namespace {

double wrapped_difference(double a, double b)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

void require_same_dim(const BehaviorPoint& a, const BehaviorPoint& b)
{
    if (a.size() != b.size()) {
        std::ostringstream msg;
        msg << "kernel: dimension mismatch (" << a.size() << " vs " << b.size() << ")";
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

double Kernel::distance_between(const BehaviorPoint& a, const BehaviorPoint& b) const
{
    require_same_dim(a, b);
    if (distance == DistanceKind::Euclidean)
        return (a - b).norm();
    double sq = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double d = wrapped_difference(a[i], b[i]);
        sq += d * d;
    }
    return std::sqrt(sq);
}

double Kernel::operator()(const BehaviorPoint& a, const BehaviorPoint& b) const
{
    const double r = distance_between(a, b);
    switch (family) {
    case KernelFamily::SquaredExponential:
        return std::exp(-(r * r) / (2.0 * sigma * sigma));
    case KernelFamily::Exponential:
        return std::exp(-r / sigma);
    }
    return 0.0;
}

double kernel_eval(const Kernel& kernel, const BehaviorPoint& a, const BehaviorPoint& b)
{
    return kernel(a, b);
}

PriorMean zero_prior(std::size_t output_dim)
{
    return [output_dim](const BehaviorPoint&) {
        return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(output_dim)).eval();
    };
}

ObservationSet::ObservationSet(std::size_t output_dim, double noise_variance)
    : output_dim_(output_dim), noise_variance_(noise_variance)
{
    if (output_dim == 0)
        throw std::invalid_argument("ObservationSet: output dimension must be positive");
    if (!(noise_variance >= 0.0))
        throw std::invalid_argument("ObservationSet: noise variance must be >= 0");
}

void ObservationSet::add(const BehaviorPoint& x, const Eigen::VectorXd& y)
{
    if (static_cast<std::size_t>(y.size()) != output_dim_) {
        std::ostringstream msg;
        msg << "ObservationSet: output has " << y.size() << " entries, expected " << output_dim_;
        throw std::invalid_argument(msg.str());
    }
    if (!inputs_.empty() && x.size() != inputs_.front().size()) {
        std::ostringstream msg;
        msg << "ObservationSet: input has " << x.size() << " entries, expected "
            << inputs_.front().size();
        throw std::invalid_argument(msg.str());
    }
    inputs_.push_back(x);
    outputs_.push_back(y);
}

GpModel::GpModel(ObservationSet observations, Kernel kernel, PriorMean prior)
    : observations_(std::move(observations)), kernel_(kernel), prior_(std::move(prior))
{
}

GpModel GpModel::fit(ObservationSet observations, Kernel kernel, PriorMean prior)
{
    GpModel model(std::move(observations), kernel, std::move(prior));
    const auto& xs = model.observations_.inputs();
    const auto& ys = model.observations_.outputs();
    const auto t = static_cast<Eigen::Index>(xs.size());
    const auto d = static_cast<Eigen::Index>(model.observations_.output_dim());
    if (t == 0)
        return model;

    model.input_dim_ = xs.front().size();
    model.gram_.resize(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        model.gram_(i, i) = kernel(xs[i], xs[i]) + model.observations_.noise_variance();
        for (Eigen::Index j = 0; j < i; ++j) {
            const double k = kernel(xs[i], xs[j]);
            model.gram_(i, j) = k;
            model.gram_(j, i) = k;
        }
    }

    auto factor_ok = [&model]() {
        return model.llt_.info() == Eigen::Success && model.llt_.matrixLLT().allFinite();
    };
    model.llt_.compute(model.gram_);
    if (!factor_ok()) {
        model.gram_.diagonal().array() += jitter;
        model.used_jitter_ = true;
        model.llt_.compute(model.gram_);
        if (!factor_ok()) {
            std::ostringstream msg;
            msg << "GpModel::fit: kernel matrix is not positive definite (t=" << t
                << ", noise_variance=" << model.observations_.noise_variance()
                << ", kernel sigma=" << kernel.sigma << ") even after jitter " << jitter;
            throw FactorizationError(msg.str());
        }
    }

    Eigen::MatrixXd residuals(t, d);
    for (Eigen::Index i = 0; i < t; ++i) {
        const Eigen::VectorXd p = model.prior_(xs[i]);
        if (p.size() != d)
            throw std::invalid_argument("GpModel::fit: prior mean has wrong output dimension");
        residuals.row(i) = (ys[i] - p).transpose();
    }
    model.weights_ = model.llt_.solve(residuals);
    return model;
}

Prediction GpModel::predict(const BehaviorPoint& x) const
{
    Prediction out;
    out.mean = prior_(x);
    out.variance = kernel_(x, x);
    const auto t = static_cast<Eigen::Index>(observations_.size());
    if (t == 0)
        return out;
    if (x.size() != input_dim_)
        throw std::invalid_argument("GpModel::predict: query has wrong dimension");

    const auto& xs = observations_.inputs();
    Eigen::VectorXd k(t);
    for (Eigen::Index i = 0; i < t; ++i)
        k[i] = kernel_(x, xs[i]);

    out.mean += weights_.transpose() * k;
    const Eigen::VectorXd v = llt_.matrixL().solve(k);
    out.variance = std::clamp(out.variance - v.squaredNorm(), 0.0, out.variance);
    return out;
}

Eigen::MatrixXd GpModel::lower_factor() const
{
    if (observations_.empty())
        return {};
    return llt_.matrixL();
}

} // namespace sela::gp
