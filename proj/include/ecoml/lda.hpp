#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ecoml/dataset.hpp"

namespace ecoml {

/// Equal-covariance Gaussian discriminant with Fisher discriminant axes.
///
/// The per-class linear scores x'C^-1 mu_j - mu_j'C^-1 mu_j / 2 + log prior_j
/// are precomputed; for two classes their argmax is the classic rule
/// b'(x - (mu_0 + mu_1)/2) > -log(prior_0 / prior_1) with b = C^-1 (mu_0 - mu_1).
struct LdaModel {
    std::vector<Eigen::VectorXd> class_means;
    Eigen::MatrixXd pooled_covariance;
    std::vector<double> priors;
    /// Columns are LD1, LD2, ...; each has b'Cb = 1.
    Eigen::MatrixXd discriminant_axes;
    Eigen::VectorXd axis_eigenvalues;
    Eigen::MatrixXd between_scatter;
    double regularization_epsilon = 0.0;

    // Precomputed score terms: coefficients column j = C^-1 mu_j.
    Eigen::MatrixXd score_coefficients;
    Eigen::VectorXd score_offsets;

    std::size_t p() const { return static_cast<std::size_t>(pooled_covariance.rows()); }
    std::size_t c() const { return class_means.size(); }

    Eigen::VectorXd scores(const Eigen::VectorXd& x) const;
    int predict(const Eigen::VectorXd& x) const;
    /// Coordinates of x along the discriminant axes.
    Eigen::VectorXd transform(const Eigen::VectorXd& x) const;
};

inline constexpr double kLdaRegularization = 1e-8;

/// Builds a model from its statistical parameters (no data). Discriminant
/// axes are derived only when a between-class scatter is supplied.
LdaModel make_lda_model(std::vector<Eigen::VectorXd> class_means, Eigen::MatrixXd pooled_covariance,
                        std::vector<double> priors, const Eigen::MatrixXd& between_scatter = {});

LdaModel fit_lda(const Dataset& ds, double epsilon = kLdaRegularization);

/// Pairwise Fisher criterion (b'(mu_i - mu_j))^2 / b'Cb.
double lda_score(const LdaModel& model, const Eigen::VectorXd& direction, std::size_t class_i, std::size_t class_j);

/// Multiclass Fisher ratio b'S_B b / b'Cb, the quantity LD1 maximizes.
double fisher_ratio(const LdaModel& model, const Eigen::VectorXd& direction);

/// Delta^2 = b'(mu_i - mu_j) with b = C^-1 (mu_i - mu_j).
double mahalanobis_sq(const LdaModel& model, std::size_t class_i, std::size_t class_j);

int predict_lda(const LdaModel& model, const Eigen::VectorXd& x);

struct AxisRow {
    std::string feature;
    std::vector<double> coefficients;  // LD1, LD2, ...
};

/// Discriminant coefficients per feature (feature name -> LD1, LD2, ...).
std::vector<AxisRow> lda_axes_table(const LdaModel& model, const std::vector<std::string>& feature_names);

}  // namespace ecoml
