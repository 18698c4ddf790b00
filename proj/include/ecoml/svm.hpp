#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ecoml/dataset.hpp"

namespace ecoml {

enum class KernelKind { Linear, Rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double gamma = 1.0;  // rbf only

    static KernelSpec linear() { return {KernelKind::Linear, 0.0}; }
    static KernelSpec rbf(double gamma) { return {KernelKind::Rbf, gamma}; }
};

std::string kernel_name(KernelKind kind);

/// Linear: x.y; rbf: exp(-gamma |x - y|^2).
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// 1 / p, the conventional rbf width for p standardized inputs.
double default_gamma(std::size_t p);

struct SvmParams {
    double cost = 1.0;
    KernelSpec kernel = KernelSpec::rbf(1.0);
    double tolerance = 1e-3;  // maximal KKT violation at exit
    std::size_t max_iter = 0;  // 10^4 * n when 0
};

/// Two-class soft-margin machine in dual form. Class 0 of the training data
/// maps to +1. f(x) = sum_i dual_weights_i k(sv_i, x) + bias.
struct SvmBinaryModel {
    Eigen::MatrixXd support_vectors;  // one row per support vector
    std::vector<double> dual_weights;  // alpha_i * y_i
    std::vector<double> alphas;
    std::vector<Index> support_indices;  // rows of the training data
    double bias = 0.0;
    double cost = 1.0;
    KernelSpec kernel;
    bool converged = true;
    std::size_t iterations = 0;
    double max_kkt_violation = 0.0;

    std::size_t n_support() const { return dual_weights.size(); }
    std::size_t p() const { return static_cast<std::size_t>(support_vectors.cols()); }
};

inline constexpr double kSupportVectorThreshold = 1e-8;

/// Sequential minimal optimization with maximal-violating-pair selection.
/// `ds` must hold exactly two classes in its labels (indices need not be 0/1:
/// the lower index present maps to +1).
SvmBinaryModel fit_svm_binary(const Dataset& ds, const SvmParams& params);

double svm_decision_value(const SvmBinaryModel& model, const Eigen::VectorXd& x);

/// One-vs-one ensemble; machine m compares `pairs[m].first` (+1) with
/// `pairs[m].second`.
struct SvmMulticlassModel {
    std::vector<SvmBinaryModel> machines;
    std::vector<std::pair<int, int>> pairs;
    std::size_t n_classes = 0;
    std::size_t n_features = 0;
    double cost = 1.0;
    KernelSpec kernel;

    /// Support vectors summed over machines.
    std::size_t total_support() const;
    /// Distinct training rows that are a support vector of some machine.
    std::size_t unique_support() const;
};

/// Defaults: cost 1, rbf kernel with gamma = 1 / p.
SvmParams default_svm_params(std::size_t p);

SvmMulticlassModel fit_svm_multiclass(const Dataset& ds, const SvmParams& params);
inline SvmMulticlassModel fit_svm_multiclass(const Dataset& ds) {
    return fit_svm_multiclass(ds, default_svm_params(ds.p()));
}
int predict_svm(const SvmMulticlassModel& model, const Eigen::VectorXd& x);

/// Dual feasibility and optimality diagnostics of a fitted binary machine
/// against the data it was trained on.
struct SvmDiagnostics {
    double min_alpha = 0.0;
    double max_alpha = 0.0;
    double equality_residual = 0.0;  // |sum alpha_i y_i|
    double max_kkt_violation = 0.0;
};
SvmDiagnostics svm_diagnostics(const SvmBinaryModel& model, const Dataset& ds);

struct SvmSummaryField {
    std::string name;
    std::string value;
};

/// Parameter summary in the shape: SVM-Type, SVM-Kernel, Cost, Gamma, support
/// vector counts, Number of Classes, Levels.
std::vector<SvmSummaryField> svm_summary(const SvmMulticlassModel& model, const std::vector<std::string>& class_names);

}  // namespace ecoml
