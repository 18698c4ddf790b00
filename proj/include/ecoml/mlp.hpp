#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ecoml/dataset.hpp"

namespace ecoml {

/// Logistic sigmoid 1 / (1 + e^-x), evaluated without overflow.
double sigmoid(double x);

/// One hidden layer of sigmoid units feeding linear outputs:
/// y_k = output_bias_k + sum_j output_weights_kj g(hidden_bias_j + sum_i hidden_weights_ji x_i).
struct MlpModel {
    Eigen::MatrixXd hidden_weights;  // q x p
    Eigen::VectorXd hidden_bias;     // q
    Eigen::MatrixXd output_weights;  // c x q
    Eigen::VectorXd output_bias;     // c

    std::size_t p() const { return static_cast<std::size_t>(hidden_weights.cols()); }
    std::size_t q() const { return static_cast<std::size_t>(hidden_weights.rows()); }
    std::size_t c() const { return static_cast<std::size_t>(output_weights.rows()); }

    static MlpModel zeros(std::size_t p, std::size_t q, std::size_t c);

    /// All parameters in a fixed order (hidden weights, hidden bias, output
    /// weights, output bias), column-major within each block.
    Eigen::VectorXd flatten() const;
    void assign(const Eigen::VectorXd& flat);
    std::size_t parameter_count() const;
};

struct MlpConfig {
    std::size_t hidden_units = 5;
    std::size_t epochs = 2000;
    double learning_rate = 0.01;
    std::uint64_t seed = 42;
    double init_scale = 0.5;
    /// Training stops once an epoch lowers the error by less than this.
    double min_improvement = 1e-10;
};

struct TrainTrace {
    std::vector<double> sse;  // error after each epoch's step
    std::size_t steps = 0;
};

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& x);

/// One-hot n x c target matrix.
Eigen::MatrixXd one_hot(const std::vector<int>& labels, std::size_t c);

/// 1/2 sum over rows of |forward(x) - target|^2.
double mlp_sse(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets);

/// Backpropagated gradient of mlp_sse, in flatten() order.
Eigen::VectorXd mlp_gradient(const MlpModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets);

/// Full-batch gradient descent on the squared error against one-hot targets.
std::pair<MlpModel, TrainTrace> fit_mlp(const Dataset& ds, const MlpConfig& config = {});

/// Initial weights, uniform in [-init_scale, init_scale].
MlpModel init_mlp(std::size_t p, std::size_t q, std::size_t c, double init_scale, std::uint64_t seed);

int predict_mlp(const MlpModel& model, const Eigen::VectorXd& x);

}  // namespace ecoml
