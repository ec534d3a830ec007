#include "rebal/error.hpp"
#include "rebal/models.hpp"

#include <algorithm>
#include <cmath>

namespace rebal {

double sigmoid(double z) noexcept {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow
double softplus(double z) noexcept { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

} // namespace

LogisticObjective logistic_objective(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                                     double bias, double l2) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    LogisticObjective out;
    out.grad_weights.assign(d, 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = x.row(i);
        double z = bias;
        for (std::size_t j = 0; j < d; ++j) z += weights[j] * row[j];
        const double yi = y[i] == 1 ? 1.0 : 0.0;
        loss += softplus(z) - yi * z;
        const double residual = sigmoid(z) - yi;
        for (std::size_t j = 0; j < d; ++j) out.grad_weights[j] += residual * row[j];
        out.grad_bias += residual;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    double penalty = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        out.grad_weights[j] = out.grad_weights[j] * inv_n + l2 * weights[j];
        penalty += weights[j] * weights[j];
    }
    out.grad_bias *= inv_n;
    out.loss = loss * inv_n + 0.5 * l2 * penalty;
    return out;
}

LinearModel fit_logistic(const FeatureMatrix& x, std::span<const int> y, const ModelConfig& cfg) {
    if (x.n_rows() == 0) {
        throw Error(ErrorCode::EmptyInput, "logistic regression needs at least one row");
    }
    if (y.size() != x.n_rows()) {
        throw Error(ErrorCode::LengthMismatch, "one label per row required");
    }
    if (!(cfg.learning_rate > 0.0) || !(cfg.l2 >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "learning rate must be positive and l2 nonnegative");
    }

    LinearModel model;
    model.weights.assign(x.n_cols(), 0.0);
    model.loss_history.reserve(cfg.iterations + 1);

    for (std::size_t it = 0; it <= cfg.iterations; ++it) {
        const auto obj = logistic_objective(x.values, y, model.weights, model.bias, cfg.l2);
        if (!std::isfinite(obj.loss)) {
            throw Error(ErrorCode::NonFiniteLoss, "loss diverged at iteration " + std::to_string(it) +
                                                      "; lower the learning rate");
        }
        model.loss_history.push_back(obj.loss);
        model.final_loss = obj.loss;

        double grad_norm = std::abs(obj.grad_bias);
        for (double g : obj.grad_weights) grad_norm = std::max(grad_norm, std::abs(g));
        if (grad_norm < cfg.tolerance || it == cfg.iterations) {
            break;
        }
        for (std::size_t j = 0; j < model.weights.size(); ++j) {
            model.weights[j] -= cfg.learning_rate * obj.grad_weights[j];
        }
        model.bias -= cfg.learning_rate * obj.grad_bias;
        model.iterations = it + 1;
    }
    return model;
}

} // namespace rebal
