#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ecoml/dataset.hpp"

namespace ecoml {

/// Gaussian naive Bayes: class prior times a product of per-feature normal
/// likelihoods. `means` and `variances` are c x p.
struct NaiveBayesModel {
    std::vector<double> priors;
    Eigen::MatrixXd means;
    Eigen::MatrixXd variances;
    double variance_floor = 0.0;

    std::size_t c() const { return priors.size(); }
    std::size_t p() const { return static_cast<std::size_t>(means.cols()); }
};

inline constexpr double kNbVarianceFloorScale = 1e-9;

NaiveBayesModel fit_naive_bayes(const Dataset& ds);

/// log p(C_j) + sum_k log N(x_k; mean_jk, var_jk), unnormalized.
Eigen::VectorXd nb_log_joint(const NaiveBayesModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd nb_posterior(const NaiveBayesModel& model, const Eigen::VectorXd& x);
int predict_nb(const NaiveBayesModel& model, const Eigen::VectorXd& x);

}  // namespace ecoml
