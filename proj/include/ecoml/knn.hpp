#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ecoml/dataset.hpp"

namespace ecoml {

inline constexpr std::size_t kDefaultK = 5;

/// Lazy learner: the training set kept verbatim.
struct KnnModel {
    Eigen::MatrixXd features;
    std::vector<int> labels;
    std::size_t n_classes = 0;
    std::size_t k = kDefaultK;

    std::size_t n() const { return labels.size(); }
    std::size_t p() const { return static_cast<std::size_t>(features.cols()); }
};

KnnModel fit_knn(const Dataset& ds, std::size_t k = kDefaultK);

/// Training rows ordered by (Euclidean distance to x, row index), first k.
std::vector<Index> knn_neighbors(const KnnModel& model, const Eigen::VectorXd& x);

/// Mode of the k nearest labels; ties go to the lowest class index.
int knn_predict(const KnnModel& model, const Eigen::VectorXd& x);

}  // namespace ecoml
