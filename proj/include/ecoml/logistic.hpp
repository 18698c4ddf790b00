#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ecoml/dataset.hpp"

namespace ecoml {

struct LogisticConfig {
    double learning_rate = 0.1;
    std::size_t max_iter = 5000;
    double tolerance = 1e-8;
};

/// Multinomial logistic regression. Row k of `weights` holds (b0, b1..bp) for
/// class k; the last class row is pinned at zero, so for two classes
/// -row0 . (1, x) is the log-odds of class 1.
struct LogisticModel {
    Eigen::MatrixXd weights;
    std::size_t iterations = 0;
    double final_loss = 0.0;
    std::vector<double> loss_history;  // loss before the first step, then after each step

    std::size_t p() const { return static_cast<std::size_t>(weights.cols()) - 1; }
    std::size_t c() const { return static_cast<std::size_t>(weights.rows()); }
};

/// Mean cross-entropy of softmax(W [1 x]) against the labels.
double logistic_loss(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& x, const std::vector<int>& y);

/// Gradient of logistic_loss; the pinned last row is always zero.
Eigen::MatrixXd logistic_gradient(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& x, const std::vector<int>& y);

/// Full-batch gradient descent from zero weights. Stops after max_iter steps or
/// when one step lowers the loss by less than the tolerance.
LogisticModel fit_logistic(const Dataset& ds, const LogisticConfig& config = {});

Eigen::VectorXd predict_logistic_proba(const LogisticModel& model, const Eigen::VectorXd& x);
int predict_logistic(const LogisticModel& model, const Eigen::VectorXd& x);

/// ln p(class 1) / p(class 0) for a two-class model.
double logistic_log_odds(const LogisticModel& model, const Eigen::VectorXd& x);

}  // namespace ecoml
