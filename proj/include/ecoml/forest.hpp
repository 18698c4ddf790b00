#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ecoml/tree.hpp"

namespace ecoml {

struct ForestParams {
    std::size_t n_trees = 500;
    std::optional<std::size_t> m_try;  // floor(sqrt(p)) when empty
    std::uint64_t seed = 42;
    bool bootstrap = true;  // false trains every tree on the full data (test hook)
};

/// Bagged Gini trees. `importance[f]` is the mean over trees of the summed
/// (node size x impurity decrease) at nodes splitting on f.
struct ForestModel {
    std::vector<DecisionTreeModel> trees;
    std::size_t m_try = 1;
    std::uint64_t seed = 0;
    std::vector<double> importance;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;

    std::size_t n_trees() const { return trees.size(); }
    /// Per-class tree vote counts for x.
    std::vector<std::size_t> votes(const Eigen::VectorXd& x) const;
    int predict(const Eigen::VectorXd& x) const;
};

std::size_t default_m_try(std::size_t p);
ForestModel fit_random_forest(const Dataset& ds, const ForestParams& params = {});
int predict_forest(const ForestModel& model, const Eigen::VectorXd& x);

/// Index of the largest count; ties go to the lowest index.
int vote_mode(const std::vector<std::size_t>& votes);

/// Error rate of the vote over the first t trees, t = 1..n_trees, on `ds`.
std::vector<double> forest_error_trace(const ForestModel& model, const Dataset& ds);

}  // namespace ecoml
