#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ecoml/dataset.hpp"
#include "ecoml/random.hpp"

namespace ecoml {

/// Shannon entropy in bits of a class-count vector; 0 log 0 = 0.
double entropy(std::span<const std::size_t> class_counts);

/// Gini impurity 1 - sum p_i^2 of a class-count vector.
double gini(std::span<const std::size_t> class_counts);

/// Size-weighted mean entropy of the parts of a split.
double conditional_entropy(const std::vector<std::vector<std::size_t>>& partition);

/// entropy(parent) - conditional_entropy(partition). The parts must add up to
/// the parent class by class.
double information_gain(std::span<const std::size_t> parent, const std::vector<std::vector<std::size_t>>& partition);

enum class SplitCriterion { Entropy, Gini };

struct TreeParams {
    std::optional<std::size_t> max_depth;  // unlimited when empty
    std::size_t min_samples_split = 2;
    SplitCriterion criterion = SplitCriterion::Entropy;
};

/// Flat node record; children are indices into DecisionTreeModel::nodes.
struct TreeNode {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    int class_index = 0;
    std::vector<double> class_distribution;
    std::size_t n_samples = 0;
    double impurity = 0.0;
};

struct DecisionTreeModel {
    std::vector<TreeNode> nodes;  // root at 0
    TreeParams params;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;

    /// Index of the leaf reached by x; x[feature] <= threshold goes left.
    std::size_t leaf_for(const Eigen::VectorXd& x) const;
    int predict(const Eigen::VectorXd& x) const;
    std::size_t depth() const;
};

DecisionTreeModel fit_decision_tree(const Dataset& ds, const TreeParams& params = {});
int predict_tree(const DecisionTreeModel& model, const Eigen::VectorXd& x);

namespace detail {

/// Feature subset drawn at each node (random-forest mode). When none of the
/// drawn features can split the node, the builder falls back to the rest.
struct FeatureSampler {
    std::size_t m_try = 0;
    Rng* rng = nullptr;
};

/// Grows a tree on rows `rows` of `ds` (repeats allowed). Accumulates the
/// node-weighted impurity decrease per feature into `importance` when given.
DecisionTreeModel grow_tree(const Dataset& ds, std::span<const Index> rows, const TreeParams& params,
                            const FeatureSampler* sampler, std::vector<double>* importance);

}  // namespace detail

}  // namespace ecoml
